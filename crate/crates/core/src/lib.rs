//! Pseudo-density matrices (PDMs) for two-time quantum processes.
//!
//! The crate builds PDMs in closed form from a state and a channel or
//! tomographically from two-time correlator tables, measures how far a PDM
//! sits from the set of density matrices, synthesizes positive
//! semidefinite witnesses for that distance, classifies channels in the
//! coherence hierarchy and evaluates Leggett-Garg quantities.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the `pdm-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coherence;
pub mod error;
pub mod leggett_garg;
pub mod linalg;
pub mod matrix;
pub mod pdm;
pub mod qobjects;
pub mod random;
pub mod simulate;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{eig_hermitian, EigenDecomposition};
pub use matrix::{HermitianMatrix, Matrix, C64};
