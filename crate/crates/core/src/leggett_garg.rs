//! Leggett-Garg quantity `K = C₁₂ + C₂₃ - C₁₃` for a three-time process,
//! its spatial counterpart and a side-by-side comparison with SI detection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix};
use crate::pdm::{pdm_closed_form, si_measure, synthesize_witness, Pdm, Witness};
use crate::qobjects::channel::compose;
use crate::qobjects::{DensityMatrix, KrausChannel, LightTouchObservable};
use crate::simulate::{pair_rng, sample_pair, SampleEstimate};
use crate::tol;

/// Hermitian `Q` with `Q² = I`, i.e. spectrum in `{±1}`.
#[derive(Clone, Debug)]
pub struct DichotomicObservable {
    label: String,
    mat: HermitianMatrix,
}

impl DichotomicObservable {
    pub fn new(label: impl Into<String>, mat: HermitianMatrix) -> Result<Self> {
        let sq = mat.as_matrix() * mat.as_matrix();
        let dev = sq.max_abs_diff(&Matrix::identity(mat.dim()));
        if dev > tol::SPECTRAL {
            return Err(Error::InvalidArgument(format!("Q² differs from I by {dev:e}")));
        }
        Ok(Self { label: label.into(), mat })
    }

    /// Pauli `Z` on a qubit.
    pub fn z() -> Self {
        Self { label: "Z".into(), mat: HermitianMatrix::diag(&[1.0, -1.0]) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Diagonal in the computational basis.
    pub fn is_incoherent(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.mat[(i, j)].norm() <= tol::HERMITIAN))
    }

    pub fn to_observable(&self) -> LightTouchObservable {
        LightTouchObservable::new(self.label.clone(), self.mat.clone()).expect("±1 spectrum is light-touch")
    }
}

/// Initial state, the channels between `t₁→t₂` and `t₂→t₃`, and the measured `Q`.
#[derive(Clone, Debug)]
pub struct LgScenario {
    pub initial: DensityMatrix,
    pub ch12: KrausChannel,
    pub ch23: KrausChannel,
    pub q: DichotomicObservable,
}

impl LgScenario {
    pub fn new(initial: DensityMatrix, ch12: KrausChannel, ch23: KrausChannel, q: DichotomicObservable) -> Result<Self> {
        let d = initial.dim();
        if [ch12.in_dim(), ch12.out_dim(), ch23.in_dim(), ch23.out_dim(), q.dim()].iter().any(|&x| x != d) {
            return Err(Error::DimensionMismatch(format!(
                "state {d}, ch12 {}->{}, ch23 {}->{}, Q {}",
                ch12.in_dim(),
                ch12.out_dim(),
                ch23.in_dim(),
                ch23.out_dim(),
                q.dim()
            )));
        }
        Ok(Self { initial, ch12, ch23, q })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LgResult {
    pub c12: f64,
    pub c23: f64,
    pub c13: f64,
    pub k: f64,
}

impl LgResult {
    fn from_parts(c12: f64, c23: f64, c13: f64) -> Self {
        Self { c12, c23, c13, k: c12 + c23 - c13 }
    }

    pub fn violates(&self) -> bool {
        self.k > 1.0 + tol::CHANNEL_IDENTITY
    }
}

fn correlator(rho: &DensityMatrix, ch: &KrausChannel, qq: &HermitianMatrix) -> Result<f64> {
    Ok(pdm_closed_form(rho, ch)?.matrix().expectation(qq))
}

/// Exact correlators through `C = Tr[R(ρ', N') (Q ⊗ Q)]`:
/// * `C₁₂`: `(ρ, ch12)`,
/// * `C₂₃`: `(ch12(ρ), ch23)`, the state reaching `t₂` unmeasured,
/// * `C₁₃`: `(ρ, ch23∘ch12)`, with no measurement at `t₂`.
pub fn lg_evaluate(s: &LgScenario) -> Result<LgResult> {
    let qq = s.q.matrix().kron(s.q.matrix());
    let c12 = correlator(&s.initial, &s.ch12, &qq)?;
    let c23 = correlator(&s.ch12.apply_state(&s.initial)?, &s.ch23, &qq)?;
    let c13 = correlator(&s.initial, &compose(&s.ch23, &s.ch12)?, &qq)?;
    Ok(LgResult::from_parts(c12, c23, c13))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LgSampled {
    pub c12: SampleEstimate,
    pub c23: SampleEstimate,
    pub c13: SampleEstimate,
    pub k: f64,
    pub k_stderr: f64,
}

/// Monte Carlo estimate of the three correlators; they use streams 1, 2, 3 of `seed`.
pub fn lg_evaluate_sampled(s: &LgScenario, shots: u64, seed: u64) -> Result<LgSampled> {
    let q = s.q.to_observable();
    let mid = s.ch12.apply_state(&s.initial)?;
    let c12 = sample_pair(&s.initial, &s.ch12, &q, &q, shots, &mut pair_rng(seed, 0))?;
    let c23 = sample_pair(&mid, &s.ch23, &q, &q, shots, &mut pair_rng(seed, 1))?;
    let c13 = sample_pair(&s.initial, &compose(&s.ch23, &s.ch12)?, &q, &q, shots, &mut pair_rng(seed, 2))?;
    let k_stderr = libm::sqrt(c12.stderr * c12.stderr + c23.stderr * c23.stderr + c13.stderr * c13.stderr);
    Ok(LgSampled { c12, c23, c13, k: c12.mean + c23.mean - c13.mean, k_stderr })
}

/// `B = q₁⊗q₂⊗I + I⊗q₂⊗q₃ - q₁⊗I⊗q₃`.
pub fn b_operator(q1: &DichotomicObservable, q2: &DichotomicObservable, q3: &DichotomicObservable) -> HermitianMatrix {
    let (a, b, c) = (q1.matrix(), q2.matrix(), q3.matrix());
    let (i1, i2, i3) = (HermitianMatrix::identity(a.dim()), HermitianMatrix::identity(b.dim()), HermitianMatrix::identity(c.dim()));
    let t12 = a.kron(b).kron(&i3);
    let t23 = i1.kron(b).kron(c);
    let t13 = a.kron(&i2).kron(c);
    t12.add(&t23).sub(&t13)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialBound {
    pub max_k: f64,
    pub min_k: f64,
}

/// Extreme eigenvalues of [`b_operator`], the range of `Tr[ρ B]` over all
/// tripartite density matrices.
pub fn spatial_lg_bound(q1: &DichotomicObservable, q2: &DichotomicObservable, q3: &DichotomicObservable) -> SpatialBound {
    let e = b_operator(q1, q2, q3).eig();
    SpatialBound { max_k: e.max(), min_k: e.min() }
}

#[derive(Clone, Debug)]
pub struct LgVsSi {
    pub lg_violated: bool,
    pub max_k: f64,
    pub si_detected: bool,
    pub best_negativity: f64,
    /// Index into the supplied states of the most negative PDM.
    pub best_state: Option<usize>,
    pub witness: Option<Witness>,
}

/// LG test versus SI detection over incoherent initial states, with both legs equal to `ch`.
pub fn lg_vs_si(ch: &KrausChannel, states: &[DensityMatrix], q_list: &[DichotomicObservable]) -> Result<LgVsSi> {
    lg_vs_si_with_legs(ch, ch, states, q_list)
}

/// As [`lg_vs_si`] with independent legs; SI is evaluated on `R(ρ, ch12)`.
pub fn lg_vs_si_with_legs(ch12: &KrausChannel, ch23: &KrausChannel, states: &[DensityMatrix], q_list: &[DichotomicObservable]) -> Result<LgVsSi> {
    if let Some(k) = states.iter().position(|s| !s.is_incoherent()) {
        return Err(Error::InvalidArgument(format!("state {k} is not incoherent")));
    }
    let mut max_k = f64::NEG_INFINITY;
    let mut best: Option<(usize, f64, Pdm)> = None;
    for (idx, rho) in states.iter().enumerate() {
        for q in q_list {
            let sc = LgScenario::new(rho.clone(), ch12.clone(), ch23.clone(), q.clone())?;
            max_k = max_k.max(lg_evaluate(&sc)?.k);
        }
        let r = pdm_closed_form(rho, ch12)?;
        let neg = si_measure(&r, 1.0)?.value;
        if best.as_ref().map_or(true, |b| neg > b.1) {
            best = Some((idx, neg, r));
        }
    }
    let (best_state, best_negativity, witness) = match best {
        Some((idx, neg, r)) if neg > tol::CHANNEL_IDENTITY => (Some(idx), neg, Some(synthesize_witness(&r)?)),
        Some((idx, neg, _)) => (Some(idx), neg, None),
        None => (None, 0.0, None),
    };
    Ok(LgVsSi {
        lg_violated: max_k > 1.0 + tol::CHANNEL_IDENTITY,
        max_k,
        si_detected: best_negativity > tol::CHANNEL_IDENTITY,
        best_negativity,
        best_state,
        witness,
    })
}

/// Computational basis states and the maximally mixed state.
pub fn default_incoherent_states(d: usize) -> Vec<DensityMatrix> {
    let mut v: Vec<DensityMatrix> = (0..d).map(|k| DensityMatrix::basis(d, k)).collect();
    v.push(DensityMatrix::maximally_mixed(d));
    v
}
