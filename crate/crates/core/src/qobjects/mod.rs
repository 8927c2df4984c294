//! States, channels and local observable bases.

pub mod basis;
pub mod channel;
pub mod pauli;
pub mod state;

pub use basis::{light_touch_basis, Basis, BasisKind, LightTouchObservable, SpectrumKind};
pub use channel::{
    apply_channel, apply_superoperator, compose, dephase, dephasing_superoperator, jamiolkowski, lindblad_generator, JamiolkowskiMatrix,
    KrausChannel,
};
pub use pauli::{pauli_basis, PauliLetter, PauliString};
pub use state::DensityMatrix;
