//! Pseudo-density matrices: closed-form and tomographic construction, the
//! spatial-incompatibility measure `T_p`, witnesses and the qubit bound.

mod measure;
mod table;
mod witness;

pub use measure::{check_bound, si_measure, si_measure_with, BoundCheck, SiMethod, SiReport};
pub use table::{exact_correlators, pdm_from_correlators, CorrelatorEntry, CorrelatorTable};
pub use witness::{evaluate_witness, evaluate_witness_sampled, synthesize_witness, synthesize_witness_with, Witness, WitnessPolicy};

use alloc::format;

use crate::error::{Error, Result};
use crate::linalg::EigenDecomposition;
use crate::matrix::{anticommutator, HermitianMatrix, Matrix};
use crate::qobjects::{DensityMatrix, KrausChannel};
use crate::tol;

/// Unit-trace Hermitian operator on `H₁ ⊗ H₂`; eigenvalues may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct Pdm {
    mat: HermitianMatrix,
    dims: (usize, usize),
}

impl Pdm {
    pub fn new(mat: HermitianMatrix, dims: (usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || mat.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch(format!("{}-dimensional operator cannot carry dims {:?}", mat.dim(), dims)));
        }
        let trace = mat.trace_re();
        if (trace - 1.0).abs() > tol::SPECTRAL {
            return Err(Error::NotUnitTrace { trace });
        }
        Ok(Self { mat, dims })
    }

    pub fn from_matrix(m: Matrix, dims: (usize, usize)) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?, dims)
    }

    pub fn from_density(rho: &DensityMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::new(rho.matrix().clone(), dims)
    }

    pub(crate) fn new_unchecked(mat: HermitianMatrix, dims: (usize, usize)) -> Self {
        Self { mat, dims }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eig(&self) -> EigenDecomposition {
        self.mat.eig()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.mat.min_eigenvalue()
    }

    /// No eigenvalue below `-tol::NEGATIVITY`.
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue() >= -tol::NEGATIVITY
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &Pdm, w: f64) -> Result<Pdm> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("mixing PDMs with dims {:?} and {:?}", self.dims, other.dims)));
        }
        Ok(Pdm::new_unchecked(self.mat.scale(w).add(&other.mat.scale(1.0 - w)), self.dims))
    }
}

/// `R(ρ, N) = ½ {ρ ⊗ I, M_N}`.
pub fn pdm_closed_form(rho: &DensityMatrix, ch: &KrausChannel) -> Result<Pdm> {
    if rho.dim() != ch.in_dim() {
        return Err(Error::DimensionMismatch(format!("state has dimension {}, channel input {}", rho.dim(), ch.in_dim())));
    }
    let m = ch.jamiolkowski();
    let left = rho.as_matrix().kron(&Matrix::identity(ch.out_dim()));
    let r = anticommutator(&left, m.matrix())?.scale_re(0.5);
    Ok(Pdm::new_unchecked(HermitianMatrix::hermitian_part(&r), (ch.in_dim(), ch.out_dim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qobjects::channel::compose;

    pub(crate) fn identity_example() -> Pdm {
        pdm_closed_form(&DensityMatrix::basis(2, 0), &KrausChannel::identity(2)).unwrap()
    }

    pub(crate) fn plus_dephase_example() -> Pdm {
        pdm_closed_form(&DensityMatrix::plus(), &KrausChannel::dephasing(2)).unwrap()
    }

    #[test]
    fn identity_channel_matrix() {
        let expected = Matrix::from_real(4, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(identity_example().matrix().as_matrix(), &expected);
    }

    #[test]
    fn plus_dephase_matrix() {
        let expected = Matrix::from_real(
            4,
            4,
            &[0.5, 0.0, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.5],
        )
        .unwrap();
        assert!(plus_dephase_example().matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn maximally_mixed_gives_half_jamiolkowski() {
        let ch = compose(&KrausChannel::amplitude_damping(0.4).unwrap(), &KrausChannel::dephasing(2)).unwrap();
        let r = pdm_closed_form(&DensityMatrix::maximally_mixed(2), &ch).unwrap();
        assert!(r.matrix().max_abs_diff(&ch.jamiolkowski().matrix().scale(0.5)) < 1e-15);
        assert!((r.matrix().trace_re() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_checks() {
        assert!(matches!(pdm_closed_form(&DensityMatrix::basis(3, 0), &KrausChannel::identity(2)), Err(Error::DimensionMismatch(_))));
        assert!(matches!(Pdm::new(HermitianMatrix::identity(4), (2, 2)), Err(Error::NotUnitTrace { .. })));
        assert!(Pdm::new(HermitianMatrix::identity(4).scale(0.25), (2, 3)).is_err());
    }
}
