//! User-facing invariant suites. Each check runs a fixed number of seeded
//! random trials and reports the worst deviation it saw.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use pdm_core::coherence::{
    adversarial_coherent_state, block_positivity_test, build_ce_oi_channel, classify_channel, scan_incoherent_states, StochasticMatrix,
};
use pdm_core::leggett_garg::{b_operator, lg_evaluate, lg_evaluate_sampled, spatial_lg_bound, DichotomicObservable, LgScenario};
use pdm_core::pdm::{exact_correlators, pdm_closed_form, pdm_from_correlators, si_measure, si_measure_with, synthesize_witness, Pdm, SiMethod};
use pdm_core::qobjects::{compose, BasisKind, DensityMatrix, KrausChannel};
use pdm_core::random;

use crate::config::Suite;

/// Deliberate defects for checking that the suites catch them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Fault {
    #[default]
    None,
    /// Flips the sign of the closed-form `T₁`.
    T1Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub trials: usize,
    pub passed: bool,
    pub worst: f64,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = write!(s, "{} [{}] {} (trials {}, worst {:.3e})", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.trials, c.worst);
            if let Some(d) = &c.detail {
                let _ = write!(s, ": {d}");
            }
            s.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

/// Accumulates the worst value of a per-trial statistic and the first failure.
struct Tally {
    suite: &'static str,
    name: &'static str,
    trials: usize,
    worst: f64,
    detail: Option<String>,
}

impl Tally {
    fn new(suite: &'static str, name: &'static str) -> Self {
        Self { suite, name, trials: 0, worst: 0.0, detail: None }
    }

    fn record(&mut self, ok: bool, stat: f64, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if stat.is_finite() {
            self.worst = self.worst.max(stat);
        } else {
            self.worst = f64::INFINITY;
        }
        if !ok && self.detail.is_none() {
            self.detail = Some(format!("trial {}: {}", self.trials - 1, describe()));
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.trials += 1;
        if self.detail.is_none() {
            self.detail = Some(format!("trial {}: error {e}", self.trials - 1));
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { suite: self.suite, name: self.name, trials: self.trials, passed: self.detail.is_none(), worst: self.worst, detail: self.detail }
    }
}

fn rng_for(seed: u64, check: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(1000 + check);
    r
}

fn random_pdm(d: usize, r: &mut ChaCha20Rng) -> Pdm {
    pdm_closed_form(&random::random_state(d, r), &random::random_channel_default(d, d, r)).expect("square random channel")
}

fn random_stochastic(d: usize, r: &mut ChaCha20Rng) -> StochasticMatrix {
    let cols: Vec<Vec<f64>> = (0..d).map(|_| random::random_probabilities(d, r)).collect();
    let rows: Vec<Vec<f64>> = (0..d).map(|k| (0..d).map(|i| cols[i][k]).collect()).collect();
    StochasticMatrix::new(&rows).expect("columns are distributions")
}

fn random_oi_channel(d: usize, r: &mut ChaCha20Rng) -> KrausChannel {
    compose(&random::random_channel_default(d, d, r), &KrausChannel::dephasing(d)).expect("matching dimensions")
}

fn t1_closed(r: &Pdm, fault: Fault) -> f64 {
    let v = si_measure_with(r, 1.0, SiMethod::ClosedForm).map(|s| s.value).unwrap_or(f64::NAN);
    match fault {
        Fault::T1Sign => -v,
        Fault::None => v,
    }
}

pub fn run_suite(suite: Suite, seed: u64, fault: Fault) -> VerifyReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Pdm) {
        checks.extend(pdm_suite(seed, fault));
    }
    if matches!(suite, Suite::All | Suite::Coherence) {
        checks.extend(coherence_suite(seed));
    }
    if matches!(suite, Suite::All | Suite::Lg) {
        checks.extend(lg_suite(seed));
    }
    VerifyReport { seed, checks }
}

fn pdm_suite(seed: u64, fault: Fault) -> Vec<CheckResult> {
    const S: &str = "pdm";
    let mut out = Vec::new();

    let mut t = Tally::new(S, "worked example: identity channel on |0><0|");
    let r = pdm_closed_form(&DensityMatrix::basis(2, 0), &KrausChannel::identity(2)).expect("qubit example");
    let t1 = t1_closed(&r, fault);
    let w = synthesize_witness(&r).map(|w| w.expectation(&r)).unwrap_or(f64::NAN);
    let dev = (t1 - 1.0).abs().max((w + 0.5).abs());
    t.record(dev < 1e-9, dev, || format!("T_1 = {t1}, <W> = {w}"));
    out.push(t.finish());

    let mut t = Tally::new(S, "t1 closed-form/optimizer agreement");
    let mut g = rng_for(seed, 1);
    for _ in 0..300 {
        let r = random_pdm(2 + g.gen_range(0..2), &mut g);
        let closed = t1_closed(&r, fault);
        let opt = si_measure_with(&r, 1.0, SiMethod::ThresholdSearch).map(|s| s.value).unwrap_or(f64::NAN);
        let dev = (closed - opt).abs();
        t.record(dev < 1e-7, dev, || format!("closed form {closed} vs optimizer {opt}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "T_p positivity and zero set");
    let mut g = rng_for(seed, 2);
    for _ in 0..300 {
        let r = random_pdm(2, &mut g);
        let p = [1.0, 1.5, 2.0, 3.0][g.gen_range(0..4)];
        match si_measure(&r, p) {
            Ok(s) => {
                let ok = s.value >= 0.0 && ((s.value == 0.0) == (r.min_eigenvalue() >= -1e-10));
                t.record(ok, (-s.value).max(0.0), || format!("T_{p} = {} with min eigenvalue {}", s.value, r.min_eigenvalue()));
            }
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "T_p convexity");
    let mut g = rng_for(seed, 3);
    for _ in 0..300 {
        let (a, b) = (random_pdm(2, &mut g), random_pdm(2, &mut g));
        let w: f64 = g.gen();
        let p = [1.0, 2.0, 2.5][g.gen_range(0..3)];
        let v = |r: &Pdm| si_measure(r, p).map(|s| s.value).unwrap_or(f64::NAN);
        let mixed = v(&a.mix(&b, w).expect("same dims"));
        let excess = mixed - (w * v(&a) + (1.0 - w) * v(&b));
        t.record(excess <= 1e-9, excess.max(0.0), || format!("excess {excess:e} at w = {w}, p = {p}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "T_p unitary invariance");
    let mut g = rng_for(seed, 4);
    for _ in 0..300 {
        let r = random_pdm(2, &mut g);
        let u = random::haar_unitary(4, &mut g);
        let rot = Pdm::new(r.matrix().conjugate_by(&u), r.dims()).expect("unitary keeps trace");
        let p = [1.0, 2.0, 3.0][g.gen_range(0..3)];
        let dev = (si_measure(&rot, p).map(|s| s.value).unwrap_or(f64::NAN) - si_measure(&r, p).map(|s| s.value).unwrap_or(f64::NAN)).abs();
        t.record(dev < 1e-9, dev, || format!("deviation {dev:e} at p = {p}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "T_1 monotone under CPTP maps");
    let mut g = rng_for(seed, 5);
    for _ in 0..300 {
        let r = random_pdm(2, &mut g);
        let ch = random::random_channel_default(4, 4, &mut g);
        let mapped = Pdm::new(ch.apply_hermitian(r.matrix()).expect("dims"), r.dims()).expect("trace preserved");
        let excess = t1_closed(&mapped, fault) - t1_closed(&r, fault);
        t.record(excess <= 1e-9, excess.max(0.0), || format!("T_1 grew by {excess:e}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "qubit T_1 bound");
    let mut g = rng_for(seed, 6);
    for _ in 0..1000 {
        let rho = random::random_state(2, &mut g);
        let ch = random::random_channel_default(2, 2, &mut g);
        let t1 = pdm_closed_form(&rho, &ch).map(|r| t1_closed(&r, fault)).unwrap_or(f64::NAN);
        t.record(t1 <= 1.0 + 1e-9 && t1 >= 0.0, (t1 - 1.0).max(0.0), || format!("T_1 = {t1}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "tomographic round trip");
    let mut g = rng_for(seed, 7);
    for _ in 0..200 {
        let d = 2 + g.gen_range(0..3);
        let r = random_pdm(d, &mut g);
        let k = BasisKind::for_dim(d);
        match exact_correlators(&r, k, k).and_then(|tab| pdm_from_correlators(&tab)) {
            Ok(back) => {
                let dev = back.matrix().max_abs_diff(r.matrix());
                t.record(dev < 1e-10, dev, || format!("reconstruction error {dev:e} at d = {d}"));
            }
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "witness soundness on density matrices");
    let mut g = rng_for(seed, 8);
    for _ in 0..50 {
        let r = pdm_closed_form(&random::random_pure_state(2, &mut g), &random::random_unitary_channel(2, &mut g)).expect("qubit");
        let Ok(w) = synthesize_witness(&r) else {
            continue;
        };
        for _ in 0..20 {
            let v = random::random_state(4, &mut g).expectation(w.matrix());
            t.record(v >= -1e-10, (-v).max(0.0), || format!("Tr[W rho] = {v}"));
        }
    }
    out.push(t.finish());
    out
}

fn coherence_suite(seed: u64) -> Vec<CheckResult> {
    const S: &str = "coherence";
    let mut out = Vec::new();

    let mut t = Tally::new(S, "block test agrees with full spectrum");
    let mut g = rng_for(seed, 20);
    for d in 2..=4 {
        for _ in 0..150 {
            let probs = random::random_probabilities(d, &mut g);
            let ch = if g.gen_bool(0.5) { random::random_channel_default(d, d, &mut g) } else { build_ce_oi_channel(&random_stochastic(d, &mut g)) };
            let full = pdm_closed_form(&DensityMatrix::diagonal(&probs).expect("distribution"), &ch).expect("square").min_eigenvalue();
            match block_positivity_test(&probs, &ch) {
                Ok(b) => t.record(b.compatible == (full >= -1e-9), 0.0, || format!("block verdict {} vs min eigenvalue {full:e} (d = {d})", b.compatible)),
                Err(e) => t.error(e),
            }
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "class hierarchy implications");
    let mut g = rng_for(seed, 21);
    for k in 0..200 {
        let d = 2 + g.gen_range(0..2);
        let ch = match k % 3 {
            0 => random::random_channel_default(d, d, &mut g),
            1 => build_ce_oi_channel(&random_stochastic(d, &mut g)),
            _ => random_oi_channel(d, &mut g),
        };
        match classify_channel(&ch, None) {
            Ok(rep) => {
                let ok = (!rep.is_oi || rep.is_di) && (!rep.is_ce || rep.is_ci) && (k % 3 == 0 || rep.is_oi);
                t.record(ok, 0.0, || format!("OI {} DI {} CE {} CI {}", rep.is_oi, rep.is_di, rep.is_ce, rep.is_ci));
            }
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "OI channels compatible on incoherent states");
    let mut g = rng_for(seed, 22);
    for _ in 0..20 {
        let d = 2 + g.gen_range(0..2);
        let ch = random_oi_channel(d, &mut g);
        for _ in 0..20 {
            let rho = random::random_incoherent_state(d, &mut g);
            let v = pdm_closed_form(&rho, &ch).and_then(|r| si_measure(&r, 1.0)).map(|s| s.value).unwrap_or(f64::NAN);
            t.record(v < 1e-9, v, || format!("negativity {v:e}"));
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "non-OI channels have an incoherent counterexample");
    let mut g = rng_for(seed, 23);
    for _ in 0..100 {
        let d = 2 + g.gen_range(0..2);
        let ch = random::random_channel_default(d, d, &mut g);
        let rep = classify_channel(&ch, None).expect("square");
        if rep.is_oi {
            continue;
        }
        match scan_incoherent_states(&ch) {
            Ok(found) => t.record(found.is_some(), 0.0, || "no vertex or pair mixture shows SI".into()),
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "adversarial coherent state on CE-OI channels");
    let mut g = rng_for(seed, 24);
    for _ in 0..100 {
        let d = 2 + g.gen_range(0..2);
        let a = random_stochastic(d, &mut g);
        let Some(k) = a.asymmetric_row(0, 1) else {
            continue;
        };
        let p = 0.05 + 0.9 * g.gen::<f64>();
        let ch = build_ce_oi_channel(&a);
        match adversarial_coherent_state(&a, 0, 1, k, p).and_then(|s| pdm_closed_form(&s.state, &ch)).and_then(|r| si_measure(&r, 1.0)) {
            Ok(s) => t.record(s.value > 0.0, 0.0, || format!("negativity {}", s.value)),
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());
    out
}

fn random_dichotomic(g: &mut ChaCha20Rng) -> DichotomicObservable {
    DichotomicObservable::new("q", random::random_pm1_observable(2, g)).expect("±1 spectrum")
}

fn lg_suite(seed: u64) -> Vec<CheckResult> {
    const S: &str = "lg";
    let mut out = Vec::new();

    let mut t = Tally::new(S, "B spectrum is (-3, 1)");
    let mut g = rng_for(seed, 40);
    for _ in 0..500 {
        let q: Vec<_> = (0..3).map(|_| random_dichotomic(&mut g)).collect();
        let b = spatial_lg_bound(&q[0], &q[1], &q[2]);
        let dev = (b.max_k - 1.0).abs().max((b.min_k + 3.0).abs());
        t.record(dev < 1e-9, dev, || format!("spectrum [{}, {}]", b.min_k, b.max_k));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "K of tripartite states within [-3, 1]");
    let mut g = rng_for(seed, 41);
    for _ in 0..500 {
        let q: Vec<_> = (0..3).map(|_| random_dichotomic(&mut g)).collect();
        let k = random::random_state(8, &mut g).expectation(&b_operator(&q[0], &q[1], &q[2]));
        let excess = (k - 1.0).max(-3.0 - k).max(0.0);
        t.record(excess <= 1e-9, excess, || format!("K = {k}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "B summands commute");
    let mut g = rng_for(seed, 42);
    for _ in 0..100 {
        let q: Vec<_> = (0..3).map(|_| random_dichotomic(&mut g)).collect();
        let m: Vec<_> = q.iter().map(|o| o.matrix().as_matrix()).collect();
        let i = pdm_core::Matrix::identity(2);
        let terms = [m[0].kron(m[1]).kron(&i), i.kron(m[1]).kron(m[2]), m[0].kron(&i).kron(m[2])];
        let mut worst = 0.0f64;
        for a in 0..3 {
            for b in a + 1..3 {
                worst = worst.max((&(&terms[a] * &terms[b]) - &(&terms[b] * &terms[a])).max_abs());
            }
        }
        t.record(worst < 1e-12, worst, || format!("commutator norm {worst:e}"));
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "OI legs respect K <= 1 on incoherent states");
    let mut g = rng_for(seed, 43);
    for _ in 0..300 {
        let sc = LgScenario::new(random::random_incoherent_state(2, &mut g), random_oi_channel(2, &mut g), random_oi_channel(2, &mut g), random_dichotomic(&mut g))
            .expect("qubit");
        match lg_evaluate(&sc) {
            Ok(r) => t.record(r.k <= 1.0 + 1e-9, (r.k - 1.0).max(0.0), || format!("K = {}", r.k)),
            Err(e) => t.error(e),
        }
    }
    out.push(t.finish());

    let mut t = Tally::new(S, "exact correlators match sampling within 5 sigma");
    let mut g = rng_for(seed, 44);
    for k in 0..10 {
        let ch = random::random_channel_default(2, 2, &mut g);
        let sc = LgScenario::new(random::random_state(2, &mut g), ch.clone(), ch, random_dichotomic(&mut g)).expect("qubit");
        match (lg_evaluate(&sc), lg_evaluate_sampled(&sc, 20_000, seed.wrapping_add(k))) {
            (Ok(e), Ok(s)) => {
                for (x, m) in [(e.c12, s.c12), (e.c23, s.c23), (e.c13, s.c13)] {
                    let z = if m.stderr > 0.0 { (x - m.mean).abs() / m.stderr } else { (x - m.mean).abs() * 1e12 };
                    t.record(z < 5.0, z, || format!("exact {x} vs sampled {} +/- {}", m.mean, m.stderr));
                }
            }
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
    out.push(t.finish());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let r = run_suite(Suite::All, 1, Fault::None);
        assert!(r.all_passed(), "{}", r.render());
        assert!(r.checks.iter().any(|c| c.name.contains("(-3, 1)")));
    }

    #[test]
    fn injected_sign_error_is_caught() {
        let r = run_suite(Suite::Pdm, 1, Fault::T1Sign);
        assert!(!r.all_passed());
        assert!(r.failed_names().contains(&"t1 closed-form/optimizer agreement"));
    }
}
