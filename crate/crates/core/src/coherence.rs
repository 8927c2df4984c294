//! Channel classes defined by how a channel interacts with the fully
//! dephasing map Δ, block positivity of PDMs built from incoherent inputs,
//! and the coherent inputs that expose coherence-erasing channels.
//!
//! With `S` the channel superoperator and `D` the superoperator of Δ:
//!
//! | class | identity |
//! |-------|----------|
//! | OI (off-diagonal independent) | `S = S·D` |
//! | CE (coherence erasing) | `S = D·S` |
//! | CI (creation incoherent) | `S·D = D·S·D` |
//! | DI (detection incoherent) | `D·S = D·S·D` |

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse, superop_exp};
use crate::matrix::{c, re, HermitianMatrix, Matrix};
use crate::pdm::{pdm_closed_form, si_measure};
use crate::qobjects::channel::dephasing_superoperator;
use crate::qobjects::{DensityMatrix, KrausChannel};
use crate::tol;

/// Family used to decide non-coherence-generating-and-detecting (NCGD) dynamics:
/// `Δ∘Λ(t)∘Δ∘Λ(τ)∘Δ = Δ∘Λ(t+τ)∘Δ`.
#[derive(Clone, Debug)]
pub enum NcgdProbe {
    /// A Lindblad generator; `Λ(t) = exp(ℒt)` on a logarithmic grid.
    Liouvillian(Matrix),
    /// Channels `Λ(t)` indexed by a parameter that adds under composition.
    Family(Vec<(f64, KrausChannel)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcgdMode {
    /// `Λ(t) = Λ(τ) = ch`: compares `Δ∘N∘Δ∘N∘Δ` with `Δ∘N∘N∘Δ`.
    SingleChannelSurrogate,
    LiouvillianGrid,
    DiscreteFamily,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NcgdVerdict {
    pub mode: NcgdMode,
    /// True when no tested `(t, τ)` refutes the identity.
    pub holds: bool,
    pub residual: f64,
    /// The `(t, τ)` with the largest residual.
    pub worst_point: Option<(f64, f64)>,
    pub points_tested: usize,
}

impl NcgdVerdict {
    pub fn summary(&self) -> &'static str {
        match (self.mode, self.holds) {
            (NcgdMode::LiouvillianGrid, true) => "NCGD not refuted on grid",
            (NcgdMode::DiscreteFamily, true) => "NCGD holds on family",
            (NcgdMode::SingleChannelSurrogate, true) => "NCGD holds (single-channel surrogate)",
            (_, false) => "not NCGD",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassResiduals {
    pub oi: f64,
    pub ce: f64,
    pub ci: f64,
    pub di: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceClassReport {
    pub is_oi: bool,
    pub is_ce: bool,
    pub is_ci: bool,
    pub is_di: bool,
    pub is_ncgd: bool,
    pub ncgd: NcgdVerdict,
    pub residuals: ClassResiduals,
}

/// Log-spaced grid `10^-2 … 10^1`, 10 points.
pub fn ncgd_grid() -> Vec<f64> {
    (0..10).map(|k| libm::pow(10.0, -2.0 + 3.0 * k as f64 / 9.0)).collect()
}

pub fn classify_channel(ch: &KrausChannel, probe: Option<&NcgdProbe>) -> Result<CoherenceClassReport> {
    if !ch.is_square() {
        return Err(Error::DimensionMismatch(format!("classification needs a square channel, got {}->{}", ch.in_dim(), ch.out_dim())));
    }
    let d = ch.in_dim();
    let s = ch.superoperator();
    let delta = dephasing_superoperator(d);
    let sd = &s * &delta;
    let ds = &delta * &s;
    let dsd = &ds * &delta;
    let residuals = ClassResiduals {
        oi: s.max_abs_diff(&sd),
        ce: s.max_abs_diff(&ds),
        ci: sd.max_abs_diff(&dsd),
        di: ds.max_abs_diff(&dsd),
    };
    let ok = |r: f64| r <= tol::CHANNEL_IDENTITY;
    let ncgd = match probe {
        None => {
            let lhs = &(&dsd * &s) * &delta;
            let rhs = &(&(&delta * &s) * &s) * &delta;
            let residual = lhs.max_abs_diff(&rhs);
            NcgdVerdict { mode: NcgdMode::SingleChannelSurrogate, holds: ok(residual), residual, worst_point: None, points_tested: 1 }
        }
        Some(NcgdProbe::Liouvillian(gen)) => ncgd_liouvillian(gen, d)?,
        Some(NcgdProbe::Family(family)) => ncgd_family(family, d)?,
    };
    Ok(CoherenceClassReport {
        is_oi: ok(residuals.oi),
        is_ce: ok(residuals.ce),
        is_ci: ok(residuals.ci),
        is_di: ok(residuals.di),
        is_ncgd: ncgd.holds,
        ncgd,
        residuals,
    })
}

fn dephased_pair_residual(delta: &Matrix, st: &Matrix, stau: &Matrix, sum: &Matrix) -> f64 {
    let lhs = &(&(&(delta * st) * delta) * stau) * delta;
    let rhs = &(delta * sum) * delta;
    lhs.max_abs_diff(&rhs)
}

fn ncgd_liouvillian(gen: &Matrix, d: usize) -> Result<NcgdVerdict> {
    if gen.rows() != d * d || gen.cols() != d * d {
        return Err(Error::DimensionMismatch(format!("generator is {}x{}, expected {}x{}", gen.rows(), gen.cols(), d * d, d * d)));
    }
    let delta = dephasing_superoperator(d);
    let grid = ncgd_grid();
    let props: Vec<Matrix> = grid.iter().map(|&t| superop_exp(gen, t)).collect();
    let mut worst = (0.0f64, None);
    for (a, &t) in grid.iter().enumerate() {
        for (b, &tau) in grid.iter().enumerate() {
            let sum = superop_exp(gen, t + tau);
            let r = dephased_pair_residual(&delta, &props[a], &props[b], &sum);
            if r > worst.0 || worst.1.is_none() {
                worst = (r, Some((t, tau)));
            }
        }
    }
    Ok(NcgdVerdict {
        mode: NcgdMode::LiouvillianGrid,
        holds: worst.0 <= tol::CHANNEL_IDENTITY,
        residual: worst.0,
        worst_point: worst.1,
        points_tested: grid.len() * grid.len(),
    })
}

fn ncgd_family(family: &[(f64, KrausChannel)], d: usize) -> Result<NcgdVerdict> {
    if let Some((t, ch)) = family.iter().find(|(_, ch)| ch.in_dim() != d || ch.out_dim() != d) {
        return Err(Error::DimensionMismatch(format!("family member at t = {t} is {}->{}", ch.in_dim(), ch.out_dim())));
    }
    let delta = dephasing_superoperator(d);
    let supers: Vec<Matrix> = family.iter().map(|(_, ch)| ch.superoperator()).collect();
    let mut worst = (0.0f64, None);
    let mut tested = 0;
    for (a, (t, _)) in family.iter().enumerate() {
        for (b, (tau, _)) in family.iter().enumerate() {
            let Some(sum) = family.iter().position(|(s, _)| (s - (t + tau)).abs() <= 1e-12 * (1.0 + s.abs())) else { continue };
            tested += 1;
            let r = dephased_pair_residual(&delta, &supers[a], &supers[b], &supers[sum]);
            if r > worst.0 || worst.1.is_none() {
                worst = (r, Some((*t, *tau)));
            }
        }
    }
    if tested == 0 {
        return Err(Error::InvalidArgument("family has no (t, τ) whose sum t + τ is also a member".into()));
    }
    Ok(NcgdVerdict { mode: NcgdMode::DiscreteFamily, holds: worst.0 <= tol::CHANNEL_IDENTITY, residual: worst.0, worst_point: worst.1, points_tested: tested })
}

/// Blocks `R_ij = ((p_i + p_j)/2) Φ(|j⟩⟨i|)` of the PDM of `diag(p)` and `Φ`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    probs: Vec<f64>,
    block_dim: usize,
    blocks: Vec<Matrix>,
}

impl BlockDecomposition {
    pub fn new(probs: &[f64], ch: &KrausChannel) -> Result<Self> {
        validate_probs(probs)?;
        if probs.len() != ch.in_dim() {
            return Err(Error::DimensionMismatch(format!("{} probabilities for a {}-dimensional input", probs.len(), ch.in_dim())));
        }
        let n = probs.len();
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let image = ch.apply(&Matrix::unit(n, n, j, i))?;
                blocks.push(image.scale_re(0.5 * (probs[i] + probs[j])));
            }
        }
        Ok(Self { probs: probs.to_vec(), block_dim: ch.out_dim(), blocks })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i * self.probs.len() + j]
    }

    /// The full PDM assembled from its blocks.
    pub fn assemble(&self) -> Matrix {
        let (n, m) = (self.len(), self.block_dim);
        let mut out = Matrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                out.set_block(i, j, self.block(i, j));
            }
        }
        out
    }
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() || probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("{probs:?} is not a probability vector")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockFailure {
    /// `R_ij` leaves the support of the pivot block.
    Support,
    /// A Schur complement has a negative eigenvalue.
    Schur,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPositivity {
    pub compatible: bool,
    pub failing_pair: Option<(usize, usize)>,
    pub failure_kind: Option<BlockFailure>,
}

impl BlockPositivity {
    fn pass() -> Self {
        Self { compatible: true, failing_pair: None, failure_kind: None }
    }

    fn fail(pair: (usize, usize), kind: BlockFailure) -> Self {
        Self { compatible: false, failing_pair: Some(pair), failure_kind: Some(kind) }
    }
}

/// `‖(I - A A‡) B‖_F`.
fn support_residual(a: &Matrix, a_pinv: &Matrix, b: &Matrix) -> f64 {
    let proj = a * a_pinv;
    (b - &(&proj * b)).frobenius_norm()
}

fn min_eig(m: &Matrix) -> f64 {
    HermitianMatrix::hermitian_part(m).min_eigenvalue()
}

/// Decides `R(diag(p), Φ) ⪰ 0` block by block.
///
/// Blocks are eliminated in index order: the current pivot `A` must be
/// PSD, every other block `B` in its row must lie in the support of `A`,
/// and the remaining blocks are replaced by `C - B† A‡ B`. The failing
/// pair names the pivot and the block that violated a condition.
pub fn block_positivity_test(probs: &[f64], ch: &KrausChannel) -> Result<BlockPositivity> {
    let bd = BlockDecomposition::new(probs, ch)?;
    let n = bd.len();
    let mut work: Vec<Matrix> = bd.blocks.clone();
    let idx = |i: usize, j: usize| i * n + j;
    // which pivot last modified each diagonal block
    let mut last_pivot: Vec<Option<usize>> = alloc::vec![None; n];
    for k in 0..n {
        let a = work[idx(k, k)].clone();
        if min_eig(&a) < -tol::BLOCK {
            return Ok(BlockPositivity::fail((last_pivot[k].unwrap_or(k), k), BlockFailure::Schur));
        }
        let a_pinv = pseudo_inverse(&HermitianMatrix::hermitian_part(&a), tol::RANK).into_matrix();
        for j in (k + 1)..n {
            if support_residual(&a, &a_pinv, &work[idx(k, j)]) > tol::BLOCK {
                return Ok(BlockPositivity::fail((k, j), BlockFailure::Support));
            }
        }
        for i in (k + 1)..n {
            let left = &work[idx(i, k)] * &a_pinv;
            for j in (k + 1)..n {
                let update = &left * &work[idx(k, j)];
                work[idx(i, j)] = &work[idx(i, j)] - &update;
            }
            last_pivot[i] = Some(k);
        }
    }
    Ok(BlockPositivity::pass())
}

/// For every pair `i ≠ j`: `R_ij ∈ supp(R_ii)` and `R_jj - R_ji R_ii‡ R_ij ⪰ 0`.
///
/// These are the conditions for each 2×2 block submatrix to be PSD. They
/// are necessary for `R ⪰ 0` and sufficient when the input is a qubit, but
/// not sufficient in general for `d >= 3`; [`block_positivity_test`] is the
/// exact test.
pub fn pairwise_block_conditions(probs: &[f64], ch: &KrausChannel) -> Result<BlockPositivity> {
    let bd = BlockDecomposition::new(probs, ch)?;
    let n = bd.len();
    for i in 0..n {
        let a = bd.block(i, i);
        let a_pinv = pseudo_inverse(&HermitianMatrix::hermitian_part(a), tol::RANK).into_matrix();
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = bd.block(i, j);
            if support_residual(a, &a_pinv, b) > tol::BLOCK {
                return Ok(BlockPositivity::fail((i, j), BlockFailure::Support));
            }
            let schur = bd.block(j, j) - &(&(bd.block(j, i) * &a_pinv) * b);
            if min_eig(&schur) < -tol::BLOCK {
                return Ok(BlockPositivity::fail((i, j), BlockFailure::Schur));
            }
        }
    }
    Ok(BlockPositivity::pass())
}

/// An incoherent input exposing spatial incompatibility of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct IncoherentCounterexample {
    pub probs: Vec<f64>,
    pub negativity: f64,
    pub block: BlockPositivity,
}

/// Scans vertex distributions `e_i`, then pair mixtures `(e_i + e_j)/2`, for an
/// incoherent state whose PDM with `ch` is not positive.
pub fn scan_incoherent_states(ch: &KrausChannel) -> Result<Option<IncoherentCounterexample>> {
    let d = ch.in_dim();
    let mut candidates: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            candidates.push((0..d).map(|k| if k == i || k == j { 0.5 } else { 0.0 }).collect());
        }
    }
    for probs in candidates {
        let rho = DensityMatrix::diagonal(&probs)?;
        let negativity = si_measure(&pdm_closed_form(&rho, ch)?, 1.0)?.value;
        let block = block_positivity_test(&probs, ch)?;
        let support_fail = block.failure_kind == Some(BlockFailure::Support);
        if negativity > tol::CHANNEL_IDENTITY || support_fail {
            return Ok(Some(IncoherentCounterexample { probs, negativity, block }));
        }
    }
    Ok(None)
}

/// Column-stochastic matrix `a_ki ≥ 0`, `Σ_k a_ki = 1`, describing
/// `C(|i⟩⟨i|) = Σ_k a_ki |k⟩⟨k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
}

impl StochasticMatrix {
    /// `rows[k][i] = a_ki`.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if n_rows == 0 || n_cols == 0 || rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("stochastic matrix must be a non-empty rectangle".into()));
        }
        let a: Vec<f64> = rows.iter().flatten().copied().collect();
        if a.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidArgument("stochastic matrix entries must be finite and nonnegative".into()));
        }
        for i in 0..n_cols {
            let s: f64 = (0..n_rows).map(|k| a[k * n_cols + i]).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("column {i} sums to {s}")));
            }
        }
        Ok(Self { rows: n_rows, cols: n_cols, a })
    }

    pub fn identity(d: usize) -> Self {
        Self { rows: d, cols: d, a: (0..d * d).map(|x| if x / d == x % d { 1.0 } else { 0.0 }).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.a[k * self.cols + i]
    }

    /// First row `k` with `a_ki ≠ a_kj`.
    pub fn asymmetric_row(&self, i: usize, j: usize) -> Option<usize> {
        (0..self.rows).find(|&k| self.get(k, i) != self.get(k, j))
    }
}

/// `C(|i⟩⟨j|) = 0` for `i ≠ j` and `C(|i⟩⟨i|) = Σ_k a_ki |k⟩⟨k|`, via Kraus
/// operators `√a_ki |k⟩⟨i|`.
pub fn build_ce_oi_channel(a: &StochasticMatrix) -> KrausChannel {
    let mut ops = Vec::new();
    for k in 0..a.rows {
        for i in 0..a.cols {
            let w = a.get(k, i);
            if w > 0.0 {
                ops.push(Matrix::unit(a.rows, a.cols, k, i).scale_re(libm::sqrt(w)));
            }
        }
    }
    KrausChannel::new_unchecked(a.cols, a.rows, ops)
}

#[derive(Clone, Debug)]
pub struct AdversarialState {
    pub state: DensityMatrix,
    /// `det` of the PDM restricted to `{|i,k⟩, |j,k⟩}`.
    pub block_det: f64,
    pub row: usize,
}

/// `|ψ⟩ = √p|i⟩ + √(1-p)|j⟩`. For the channel built from `a`, the PDM restricted
/// to `{|i,k⟩, |j,k⟩}` is `[[p a_ki, √(p(1-p)) (a_ki + a_kj)/2], [·, (1-p) a_kj]]`,
/// with determinant `-p(1-p)(a_ki - a_kj)²/4`.
pub fn adversarial_coherent_state(a: &StochasticMatrix, i: usize, j: usize, k: usize, p: f64) -> Result<AdversarialState> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in (0, 1)")));
    }
    if i >= a.cols || j >= a.cols || k >= a.rows {
        return Err(Error::DimensionMismatch(format!("indices ({i}, {j}, {k}) out of range for a {}x{} matrix", a.rows, a.cols)));
    }
    if i == j {
        return Err(Error::InvalidArgument("columns i and j must differ".into()));
    }
    if a.asymmetric_row(i, j).is_none() {
        return Err(Error::NoAsymmetricColumn);
    }
    let (aki, akj) = (a.get(k, i), a.get(k, j));
    if aki == akj {
        return Err(Error::InvalidArgument(format!("row {k} has a_ki = a_kj; pick a row that separates columns {i} and {j}")));
    }
    let mut psi = alloc::vec![c(0.0, 0.0); a.cols];
    psi[i] = re(libm::sqrt(p));
    psi[j] = re(libm::sqrt(1.0 - p));
    let state = DensityMatrix::pure(&psi)?;
    let diff = aki - akj;
    Ok(AdversarialState { state, block_det: -p * (1.0 - p) * diff * diff / 4.0, row: k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qobjects::channel::{compose, lindblad_generator};
    use crate::qobjects::pauli::{x, z};
    use crate::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn sm_pair() -> KrausChannel {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        KrausChannel::new(alloc::vec![
            Matrix::from_real(2, 2, &[h, 0.0, h, 0.0]).unwrap(),
            Matrix::from_real(2, 2, &[0.0, h, 0.0, -h]).unwrap(),
        ])
        .unwrap()
    }

    fn classes(r: &CoherenceClassReport) -> [bool; 4] {
        [r.is_oi, r.is_ce, r.is_ci, r.is_di]
    }

    #[test]
    fn classify_examples() {
        let r = classify_channel(&KrausChannel::dephasing(2), None).unwrap();
        assert_eq!(classes(&r), [true; 4]);
        let r = classify_channel(&KrausChannel::identity(2), None).unwrap();
        assert_eq!(classes(&r), [false, false, true, true]);
        assert!(r.is_ncgd);
        let r = classify_channel(&sm_pair(), None).unwrap();
        assert!(r.is_oi && r.is_di && !r.is_ci);
        assert!((r.residuals.ci - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hadamard_is_not_ncgd() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let had = KrausChannel::unitary(Matrix::from_real(2, 2, &[h, h, h, -h]).unwrap()).unwrap();
        let r = classify_channel(&had, None).unwrap();
        assert!(!r.is_ncgd && !r.is_ci && !r.is_di);
    }

    #[test]
    fn liouvillian_probe() {
        // pure dephasing commutes with Δ: NCGD on every grid point
        let gen = lindblad_generator(&HermitianMatrix::diag(&[0.0, 0.0]), &[z()]).unwrap();
        let r = classify_channel(&KrausChannel::identity(2), Some(&NcgdProbe::Liouvillian(gen))).unwrap();
        assert!(r.is_ncgd);
        assert_eq!(r.ncgd.points_tested, 100);
        assert_eq!(r.ncgd.summary(), "NCGD not refuted on grid");
        // Rabi driving creates and detects coherence
        let gen = lindblad_generator(&HermitianMatrix::new(x()).unwrap(), &[]).unwrap();
        let r = classify_channel(&KrausChannel::identity(2), Some(&NcgdProbe::Liouvillian(gen))).unwrap();
        assert!(!r.is_ncgd && r.ncgd.worst_point.is_some());
    }

    #[test]
    fn family_probe() {
        let family: Vec<(f64, KrausChannel)> = [0.0, 0.5, 1.0, 1.5]
            .iter()
            .map(|&t| {
                let u = &Matrix::identity(2).scale_re(libm::cos(t)) - &x().scale(c(0.0, libm::sin(t)));
                (t, KrausChannel::unitary(u).unwrap())
            })
            .collect();
        let r = classify_channel(&KrausChannel::identity(2), Some(&NcgdProbe::Family(family))).unwrap();
        assert_eq!(r.ncgd.mode, NcgdMode::DiscreteFamily);
        assert!(!r.is_ncgd);
        let bad = alloc::vec![(1.0, KrausChannel::identity(2))];
        assert!(classify_channel(&KrausChannel::identity(2), Some(&NcgdProbe::Family(bad))).is_err());
    }

    #[test]
    fn hierarchy_implications_on_random_channels() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        for _ in 0..200 {
            let d = rng.gen_range(2..=3);
            let ch = random::random_channel(d, d, rng.gen_range(1..=4), &mut rng);
            for ch in [ch.clone(), compose(&ch, &KrausChannel::dephasing(d)).unwrap(), compose(&KrausChannel::dephasing(d), &ch).unwrap()] {
                let r = classify_channel(&ch, None).unwrap();
                assert!(!r.is_oi || r.is_di);
                assert!(!r.is_ce || r.is_ci);
            }
        }
    }

    #[test]
    fn block_test_examples() {
        let r = block_positivity_test(&[1.0, 0.0], &KrausChannel::identity(2)).unwrap();
        assert!(!r.compatible);
        assert_eq!(r.failure_kind, Some(BlockFailure::Support));
        assert_eq!(r.failing_pair, Some((0, 1)));
        assert!(block_positivity_test(&[0.3, 0.7], &sm_pair()).unwrap().compatible);
        assert!(block_positivity_test(&[0.5, 0.5], &KrausChannel::dephasing(2)).unwrap().compatible);
        assert!(block_positivity_test(&[0.5, 0.6], &KrausChannel::dephasing(2)).is_err());
    }

    #[test]
    fn block_test_matches_full_spectrum() {
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        for d in 2..=4 {
            for trial in 0..150 {
                let probs = random::random_probabilities(d, &mut rng);
                let ch = if trial % 3 == 0 {
                    compose(&random::random_channel(d, d, 2, &mut rng), &KrausChannel::dephasing(d)).unwrap()
                } else {
                    random::random_channel(d, d, rng.gen_range(1..=4), &mut rng)
                };
                let full = pdm_closed_form(&DensityMatrix::diagonal(&probs).unwrap(), &ch).unwrap();
                let psd = full.min_eigenvalue() >= -tol::BLOCK;
                assert_eq!(block_positivity_test(&probs, &ch).unwrap().compatible, psd, "d={d} trial={trial}");
                let bd = BlockDecomposition::new(&probs, &ch).unwrap();
                assert!(bd.assemble().max_abs_diff(full.matrix()) < 1e-14);
            }
        }
    }

    #[test]
    fn pairwise_conditions_are_necessary() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for _ in 0..200 {
            let probs = random::random_probabilities(3, &mut rng);
            let ch = random::random_channel(3, 3, 3, &mut rng);
            let exact = block_positivity_test(&probs, &ch).unwrap().compatible;
            let pairwise = pairwise_block_conditions(&probs, &ch).unwrap().compatible;
            assert!(!exact || pairwise);
        }
        // for qubits the two agree
        for _ in 0..200 {
            let probs = random::random_probabilities(2, &mut rng);
            let ch = random::random_channel(2, 2, 3, &mut rng);
            assert_eq!(block_positivity_test(&probs, &ch).unwrap().compatible, pairwise_block_conditions(&probs, &ch).unwrap().compatible);
        }
    }

    #[test]
    fn scan_finds_identity_counterexample() {
        let found = scan_incoherent_states(&KrausChannel::identity(2)).unwrap().unwrap();
        assert_eq!(found.probs, alloc::vec![1.0, 0.0]);
        assert!((found.negativity - 1.0).abs() < 1e-12);
        assert!(scan_incoherent_states(&sm_pair()).unwrap().is_none());
    }

    #[test]
    fn adversarial_dephasing_example() {
        let a = StochasticMatrix::identity(2);
        let adv = adversarial_coherent_state(&a, 0, 1, 0, 0.5).unwrap();
        assert_eq!(adv.block_det, -1.0 / 16.0);
        assert!(adv.state.max_abs_diff(&DensityMatrix::plus()) < 1e-15);
        let ch = build_ce_oi_channel(&a);
        let r = pdm_closed_form(&adv.state, &ch).unwrap();
        assert!((r.min_eigenvalue() - (1.0 - core::f64::consts::SQRT_2) / 4.0).abs() < 1e-12);
        let sub = r.matrix().principal(&[0, 2]);
        let det = (sub[(0, 0)] * sub[(1, 1)] - sub[(0, 1)] * sub[(1, 0)]).re;
        assert!((det - adv.block_det).abs() < 1e-15);
    }

    #[test]
    fn adversarial_errors() {
        let uniform = StochasticMatrix::new(&[alloc::vec![0.3, 0.3], alloc::vec![0.7, 0.7]]).unwrap();
        assert!(matches!(adversarial_coherent_state(&uniform, 0, 1, 0, 0.5), Err(Error::NoAsymmetricColumn)));
        let a = StochasticMatrix::new(&[alloc::vec![1.0, 0.0, 0.0], alloc::vec![0.0, 1.0, 0.0], alloc::vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(adversarial_coherent_state(&a, 0, 1, 2, 0.5), Err(Error::InvalidArgument(_))));
        assert!(adversarial_coherent_state(&a, 0, 1, 1, 0.0).is_err());
        assert!(adversarial_coherent_state(&a, 0, 0, 1, 0.5).is_err());
        assert!(StochasticMatrix::new(&[alloc::vec![0.5, 1.0], alloc::vec![0.6, 0.0]]).is_err());
    }

    #[test]
    fn adversarial_random_is_incompatible() {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        for _ in 0..200 {
            let d = rng.gen_range(2..=4);
            let cols: Vec<Vec<f64>> = (0..d).map(|_| random::random_probabilities(d, &mut rng)).collect();
            let rows: Vec<Vec<f64>> = (0..d).map(|k| (0..d).map(|i| cols[i][k]).collect()).collect();
            let a = StochasticMatrix::new(&rows).unwrap();
            let (i, j) = (0, 1 + rng.gen_range(0..d - 1));
            let k = a.asymmetric_row(i, j).unwrap();
            let p = rng.gen_range(0.01..0.99);
            let adv = adversarial_coherent_state(&a, i, j, k, p).unwrap();
            let ch = build_ce_oi_channel(&a);
            let r = pdm_closed_form(&adv.state, &ch).unwrap();
            let sub = r.matrix().principal(&[i * d + k, j * d + k]);
            let det = (sub[(0, 0)] * sub[(1, 1)] - sub[(0, 1)] * sub[(1, 0)]).re;
            assert!((det - adv.block_det).abs() < 1e-12);
            assert!(si_measure(&r, 1.0).unwrap().value > 0.0);
        }
    }

    #[test]
    fn ce_oi_builder() {
        let delta = build_ce_oi_channel(&StochasticMatrix::identity(2));
        assert!(delta.equivalent(&KrausChannel::dephasing(2)));
        assert!(delta.jamiolkowski().matrix().max_abs_diff(&Matrix::diag_real(&[1.0, 0.0, 0.0, 1.0])) < 1e-15);
        let mix = build_ce_oi_channel(&StochasticMatrix::new(&[alloc::vec![0.5, 0.5], alloc::vec![0.5, 0.5]]).unwrap());
        let r = classify_channel(&mix, None).unwrap();
        assert!(r.is_oi && r.is_ce);
        assert!(mix.trace_preservation_deviation() < 1e-15);
    }
}
