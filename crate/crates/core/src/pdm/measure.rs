use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{project_simplex, vector_p_norm, EigenDecomposition};
use crate::matrix::{HermitianMatrix, C64};
use crate::pdm::{pdm_closed_form, Pdm};
use crate::qobjects::{DensityMatrix, KrausChannel};
use crate::tol;

/// How `T_p` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SiMethod {
    /// Closed form for `p = 1`, spectral optimizer otherwise.
    #[default]
    Auto,
    /// `2 Σ |λ⁻|` with minimizer `R₊ / Tr R₊`; only valid for `p = 1`.
    ClosedForm,
    /// Euclidean simplex projection of the spectrum; only valid for `p = 2`.
    SimplexProjection,
    /// Minimizes `‖λ - q‖_p` over the simplex by bisecting on the shift `s`
    /// in `q_i = max(0, λ_i - s)`; valid for every `p >= 1`.
    ThresholdSearch,
}

/// Distance from a PDM to the set of density matrices in Schatten `p`-norm.
#[derive(Clone, Debug)]
pub struct SiReport {
    pub p: f64,
    pub value: f64,
    pub minimizer: DensityMatrix,
    pub negative_eigenpairs: Vec<(f64, Vec<C64>)>,
    pub method: SiMethod,
}

pub fn si_measure(r: &Pdm, p: f64) -> Result<SiReport> {
    si_measure_with(r, p, SiMethod::Auto)
}

pub fn si_measure_with(r: &Pdm, p: f64, method: SiMethod) -> Result<SiReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidP(p));
    }
    let method = match method {
        SiMethod::Auto if p == 1.0 => SiMethod::ClosedForm,
        SiMethod::Auto if p == 2.0 => SiMethod::SimplexProjection,
        SiMethod::Auto => SiMethod::ThresholdSearch,
        SiMethod::ClosedForm if p != 1.0 => return Err(Error::InvalidArgument(format!("closed form needs p = 1, got {p}"))),
        SiMethod::SimplexProjection if p != 2.0 => return Err(Error::InvalidArgument(format!("simplex projection needs p = 2, got {p}"))),
        m => m,
    };
    let e = r.eig();
    let negative_eigenpairs: Vec<(f64, Vec<C64>)> = e
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l < -tol::NEGATIVITY)
        .map(|(k, &l)| (l, e.eigenvector(k)))
        .collect();
    let compatible = e.min() >= -tol::NEGATIVITY;

    let (value, minimizer) = match method {
        SiMethod::ClosedForm => {
            let neg: f64 = e.eigenvalues().iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
            let plus = e.map_spectrum(|l| l.max(0.0));
            let q = plus.trace_re();
            (2.0 * neg, plus.scale(1.0 / q))
        }
        SiMethod::SimplexProjection => spectral_minimizer(&e, p, &project_simplex(e.eigenvalues())),
        SiMethod::ThresholdSearch => spectral_minimizer(&e, p, &threshold_simplex(e.eigenvalues())),
        SiMethod::Auto => unreachable!(),
    };
    Ok(SiReport {
        p,
        value: if compatible { 0.0 } else { value },
        minimizer: DensityMatrix::from_hermitian_unchecked(minimizer),
        negative_eigenpairs,
        method,
    })
}

fn spectral_minimizer(e: &EigenDecomposition, p: f64, q: &[f64]) -> (f64, HermitianMatrix) {
    let diff: Vec<f64> = e.eigenvalues().iter().zip(q).map(|(l, q)| l - q).collect();
    (vector_p_norm(&diff, p), e.with_spectrum(q))
}

/// `q_i = max(0, λ_i - s)` with `Σ q_i = 1`; `s` found by bisection.
fn threshold_simplex(lambda: &[f64]) -> Vec<f64> {
    let mass = |s: f64| lambda.iter().map(|l| (l - s).max(0.0)).sum::<f64>();
    let top = lambda.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let (mut lo, mut hi) = (top - 1.0, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    let mut q: Vec<f64> = lambda.iter().map(|l| (l - s).max(0.0)).collect();
    let total: f64 = q.iter().sum();
    for x in &mut q {
        *x /= total;
    }
    q
}

/// Outcome of comparing `T₁(R(ρ, N))` with `T₁(R(|0⟩⟨0|, I))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub t1: f64,
    pub reference: f64,
    pub bound_ok: bool,
}

/// Checks `T₁(R(ρ, N)) <= T₁(R(|0⟩⟨0|, I_d))` for a channel on `d`-level systems.
/// For qubits the reference is exactly 1.
pub fn check_bound(rho: &DensityMatrix, ch: &KrausChannel) -> Result<BoundCheck> {
    if !ch.is_square() {
        return Err(Error::DimensionMismatch(format!("bound needs equal input and output dimensions, got {}->{}", ch.in_dim(), ch.out_dim())));
    }
    let t1 = si_measure(&pdm_closed_form(rho, ch)?, 1.0)?.value;
    let d = ch.in_dim();
    let reference = if d == 2 {
        1.0
    } else {
        si_measure(&pdm_closed_form(&DensityMatrix::basis(d, 0), &KrausChannel::identity(d))?, 1.0)?.value
    };
    Ok(BoundCheck { t1, reference, bound_ok: t1 <= reference + tol::CHANNEL_IDENTITY })
}
