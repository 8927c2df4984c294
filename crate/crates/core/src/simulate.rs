//! Seeded Monte Carlo of the two-time measurement procedure: measure `A`
//! projectively (Lüders update), send the state through the channel,
//! measure `B`, record the product of the two outcomes.
//!
//! Each correlator pair draws from its own ChaCha20 stream, so a table is
//! reproducible bit for bit and pairs can be sampled in any order or in
//! parallel.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix};
use crate::pdm::{CorrelatorEntry, CorrelatorTable};
use crate::qobjects::{Basis, BasisKind, DensityMatrix, KrausChannel, LightTouchObservable, SpectrumKind};
use crate::tol;

/// Identifier of the random generator and stream layout, for output metadata.
pub const GENERATOR_ID: &str = "rand_chacha::ChaCha20Rng/seed_from_u64(seed)/stream=pair_index+1";

/// Spectral projectors of a light-touch observable onto its `+λ` and `-λ` eigenspaces.
#[derive(Clone, Debug)]
pub struct MeasurementProjectors {
    pub plus: HermitianMatrix,
    pub minus: HermitianMatrix,
    pub lambda: f64,
}

/// `P± = (I ± A/λ)/2` for a `{±λ}` spectrum; `(I, 0)` for `{λ}`.
pub fn projectors_for(obs: &LightTouchObservable) -> MeasurementProjectors {
    let d = obs.dim();
    let lambda = obs.lambda();
    match obs.kind() {
        SpectrumKind::Single => MeasurementProjectors {
            plus: HermitianMatrix::identity(d),
            minus: HermitianMatrix::diag(&alloc::vec![0.0; d]),
            lambda,
        },
        SpectrumKind::PlusMinus => {
            let a = obs.matrix().scale(0.5 / lambda);
            let half = HermitianMatrix::identity(d).scale(0.5);
            MeasurementProjectors { plus: half.add(&a), minus: half.sub(&a), lambda }
        }
    }
}

/// One shot: the two outcomes and where in the random stream it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotRecord {
    pub outcome1: f64,
    pub outcome2: f64,
    pub seed_path: SeedPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedPath {
    pub seed: u64,
    pub stream: u64,
    pub shot: u64,
}

/// Sample mean of `s₁·s₂` and its standard error `std / √shots`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
}

/// Outcome distribution of the two-time process, precomputed once.
struct BranchTree {
    lambda1: f64,
    lambda2: f64,
    /// `P(s₁ = +)`.
    p1_plus: f64,
    /// `P(s₂ = + | s₁)` indexed by `s₁ ∈ {+, -}`.
    p2_plus: [f64; 2],
}

impl BranchTree {
    fn new(rho: &DensityMatrix, ch: &KrausChannel, obs1: &LightTouchObservable, obs2: &LightTouchObservable) -> Result<Self> {
        if rho.dim() != ch.in_dim() || obs1.dim() != ch.in_dim() || obs2.dim() != ch.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "state {}, first observable {}, channel {}->{}, second observable {}",
                rho.dim(),
                obs1.dim(),
                ch.in_dim(),
                ch.out_dim(),
                obs2.dim()
            )));
        }
        let (pa, pb) = (projectors_for(obs1), projectors_for(obs2));
        let mut p1 = [pa.plus.expectation(rho), pa.minus.expectation(rho)];
        normalize_branches(&mut p1);
        let mut p2_plus = [1.0; 2];
        for (k, proj) in [&pa.plus, &pa.minus].into_iter().enumerate() {
            if p1[k] == 0.0 {
                continue;
            }
            let post = lueders_update(rho.matrix(), proj, p1[k]);
            let evolved = ch.apply(&post)?;
            let mut p2 = [pb.plus.trace_product(&evolved).re, pb.minus.trace_product(&evolved).re];
            normalize_branches(&mut p2);
            p2_plus[k] = p2[0];
        }
        Ok(Self { lambda1: pa.lambda, lambda2: pb.lambda, p1_plus: p1[0], p2_plus })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
        let first_plus = u1 < self.p1_plus;
        let second_plus = u2 < self.p2_plus[if first_plus { 0 } else { 1 }];
        let s1 = if first_plus { self.lambda1 } else { -self.lambda1 };
        let s2 = if second_plus { self.lambda2 } else { -self.lambda2 };
        (s1, s2)
    }
}

/// Clamps tiny or negative branch weights to zero and renormalizes.
fn normalize_branches(p: &mut [f64; 2]) {
    for x in p.iter_mut() {
        if *x < tol::BRANCH {
            *x = 0.0;
        }
    }
    let total = p[0] + p[1];
    p[0] /= total;
    p[1] /= total;
}

/// `P ρ P / prob`.
pub fn lueders_update(rho: &Matrix, proj: &Matrix, prob: f64) -> Matrix {
    (&(proj * rho) * proj).scale_re(1.0 / prob)
}

/// Generator for the pair at `index` of a table sampled from `seed`.
pub fn pair_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng
}

/// Individual shots on stream `stream` of `seed`.
pub fn sample_shots(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    obs1: &LightTouchObservable,
    obs2: &LightTouchObservable,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<Vec<ShotRecord>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let tree = BranchTree::new(rho, ch, obs1, obs2)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    Ok((0..shots)
        .map(|shot| {
            let (outcome1, outcome2) = tree.draw(&mut rng);
            ShotRecord { outcome1, outcome2, seed_path: SeedPath { seed, stream, shot } }
        })
        .collect())
}

/// Estimate of `⟨{A, B}⟩` from `shots` runs with the given generator.
pub fn sample_pair<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    obs1: &LightTouchObservable,
    obs2: &LightTouchObservable,
    shots: u64,
    rng: &mut R,
) -> Result<SampleEstimate> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let tree = BranchTree::new(rho, ch, obs1, obs2)?;
    let scale = tree.lambda1 * tree.lambda2;
    // outcomes are ±scale, so counting +1 products is enough
    let mut positive = 0u64;
    for _ in 0..shots {
        let (s1, s2) = tree.draw(rng);
        if (s1 > 0.0) == (s2 > 0.0) {
            positive += 1;
        }
    }
    let n = shots as f64;
    let mean = scale * (2.0 * positive as f64 - n) / n;
    let stderr = if shots > 1 {
        let k = positive as f64;
        // Σ (x - mean)² with x ∈ {+scale, -scale}
        let ss = k * (scale - mean) * (scale - mean) + (n - k) * (scale + mean) * (scale + mean);
        libm::sqrt(ss / (n - 1.0)) / libm::sqrt(n)
    } else {
        0.0
    };
    Ok(SampleEstimate { mean, stderr, shots })
}

/// `sample_pair` on stream 0 of `seed`.
pub fn sample_two_time(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    obs1: &LightTouchObservable,
    obs2: &LightTouchObservable,
    shots: u64,
    seed: u64,
) -> Result<SampleEstimate> {
    sample_pair(rho, ch, obs1, obs2, shots, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// Samples every pair of the basis grid; pair `k` (in basis order) uses
/// [`pair_rng`]`(seed, k)`.
pub fn sample_table(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    first: BasisKind,
    second: BasisKind,
    shots_per_pair: u64,
    seed: u64,
) -> Result<CorrelatorTable> {
    let (b1, b2) = (Basis::new(first), Basis::new(second));
    let mut table = CorrelatorTable::new(first, second);
    for (ia, x) in b1.elements().iter().enumerate() {
        for (ib, y) in b2.elements().iter().enumerate() {
            let index = (ia * b2.len() + ib) as u64;
            let est = sample_pair(rho, ch, x, y, shots_per_pair, &mut pair_rng(seed, index))?;
            table.insert_entry(x.label(), y.label(), CorrelatorEntry { value: est.mean, shots: Some(est.shots), stderr: Some(est.stderr) });
        }
    }
    Ok(table)
}
