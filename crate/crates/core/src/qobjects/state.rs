use alloc::format;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix, C64};
use crate::tol;

/// Unit-trace positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(mat: HermitianMatrix) -> Result<Self> {
        let trace = mat.trace_re();
        if (trace - 1.0).abs() > tol::SPECTRAL {
            return Err(Error::NotADensityMatrix(format!("trace {trace} differs from 1")));
        }
        let min = mat.min_eigenvalue();
        if min < -tol::NEGATIVITY {
            return Err(Error::NotADensityMatrix(format!("minimum eigenvalue {min:e} is negative")));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_hermitian_unchecked(mat: HermitianMatrix) -> Self {
        Self { mat }
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// `|ψ⟩⟨ψ|` for `ψ` normalized here; the zero vector is rejected.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if psi.is_empty() || norm < 1e-300 {
            return Err(Error::InvalidArgument("pure state needs a nonzero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self { mat: HermitianMatrix::projector(&v) })
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        assert!(k < d, "basis index {k} out of range for dimension {d}");
        let mut diag = alloc::vec![0.0; d];
        diag[k] = 1.0;
        Self { mat: HermitianMatrix::diag(&diag) }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: HermitianMatrix::identity(d).scale(1.0 / d as f64) }
    }

    /// `diag(probs)`; the probabilities must form a distribution.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| !(p >= -tol::NEGATIVITY)) {
            return Err(Error::NotADensityMatrix(format!("negative or non-finite probability in {probs:?}")));
        }
        Self::new(HermitianMatrix::diag(probs))
    }

    /// `|+⟩⟨+|` with entries exactly `±½`.
    pub fn plus() -> Self {
        Self::half_coherent(0.5)
    }

    pub fn minus() -> Self {
        Self::half_coherent(-0.5)
    }

    fn half_coherent(off: f64) -> Self {
        let m = Matrix::from_real(2, 2, &[0.5, off, off, 0.5]).expect("2x2");
        Self { mat: HermitianMatrix::new(m).expect("symmetric") }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.mat
    }

    /// Diagonal in the computational basis.
    pub fn is_incoherent(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.mat[(i, j)].norm() <= tol::HERMITIAN))
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.mat
    }
}
