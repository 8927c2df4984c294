//! Dispatch of a validated [`Scenario`] to the library and emission of its
//! report files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use pdm_core::coherence::{classify_channel, scan_incoherent_states, BlockFailure, NcgdMode};
use pdm_core::leggett_garg::{lg_evaluate, lg_evaluate_sampled, lg_vs_si_with_legs, spatial_lg_bound, LgScenario};
use pdm_core::matrix::Matrix;
use pdm_core::pdm::{
    check_bound, evaluate_witness, evaluate_witness_sampled, exact_correlators, pdm_closed_form, pdm_from_correlators, si_measure,
    synthesize_witness_with, CorrelatorEntry, CorrelatorTable, Pdm, SiMethod, SiReport, Witness, WitnessPolicy,
};
use pdm_core::qobjects::{Basis, DensityMatrix, KrausChannel};
use pdm_core::simulate::{pair_rng, sample_pair, GENERATOR_ID};

use crate::config::{Kind, Scenario, SweepFamily};
use crate::error::{CliError, CliResult};
use crate::json::{hermitian_json, to_json_bytes};
use crate::output::write_atomic;
use crate::verify::{run_suite, Fault};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

const IN_MEMORY: &str = "writing CSV into memory cannot fail";

/// Files written by a run and the human-readable summary for stdout.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub text: String,
    /// Names of failed verification checks; empty for every other kind.
    pub failed: Vec<String>,
}

pub fn run_scenario(sc: &Scenario, out: &Path, fault: Fault) -> CliResult<RunSummary> {
    match sc.kind {
        Kind::Pdm => run_pdm(sc, out),
        Kind::Witness => run_witness(sc, out),
        Kind::Classify => run_classify(sc, out),
        Kind::Lg => run_lg(sc, out),
        Kind::Simulate => run_simulate(sc, out),
        Kind::Sweep => run_sweep(sc, out),
        Kind::Verify => run_verify(sc, out, fault),
    }
}

fn state(sc: &Scenario) -> &DensityMatrix {
    sc.state.as_ref().expect("validated scenario has a state")
}

fn channel(sc: &Scenario) -> &KrausChannel {
    sc.channel.as_ref().expect("validated scenario has a channel")
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// `label1,label2,value,shots[,stderr]` in basis order.
pub fn table_csv(t: &CorrelatorTable) -> CliResult<Vec<u8>> {
    let sampled = t.iter().any(|(_, _, e)| e.stderr.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label1", "label2", "value", "shots"];
    if sampled {
        header.push("stderr");
    }
    w.write_record(&header).expect(IN_MEMORY);
    for (a, b, e) in t.grid() {
        let e = e.unwrap_or(CorrelatorEntry::exact(f64::NAN));
        let mut rec = vec![a, b, fmt_f(e.value), e.shots.map_or_else(String::new, |s| s.to_string())];
        if sampled {
            rec.push(e.stderr.map_or_else(String::new, fmt_f));
        }
        w.write_record(&rec).expect(IN_MEMORY);
    }
    Ok(w.into_inner().expect(IN_MEMORY))
}

#[derive(Serialize)]
struct CorrelatorJson {
    label1: String,
    label2: String,
    value: f64,
}

fn correlators_json(t: &CorrelatorTable) -> Vec<CorrelatorJson> {
    t.grid().into_iter().map(|(a, b, e)| CorrelatorJson { label1: a, label2: b, value: e.map_or(f64::NAN, |e| e.value) }).collect()
}

#[derive(Serialize)]
struct SiJson {
    p: f64,
    value: f64,
    method: &'static str,
    negative_eigenvalues: Vec<f64>,
    minimizer: JsonMatrix,
}

fn method_name(m: SiMethod) -> &'static str {
    match m {
        SiMethod::Auto => "auto",
        SiMethod::ClosedForm => "closed_form",
        SiMethod::SimplexProjection => "simplex_projection",
        SiMethod::ThresholdSearch => "threshold_search",
    }
}

fn si_json(r: &SiReport) -> SiJson {
    SiJson {
        p: r.p,
        value: r.value,
        method: method_name(r.method),
        negative_eigenvalues: r.negative_eigenpairs.iter().map(|(l, _)| *l).collect(),
        minimizer: hermitian_json(r.minimizer.matrix()),
    }
}

#[derive(Serialize)]
struct BoundJson {
    t1: f64,
    reference: f64,
    bound_ok: bool,
}

#[derive(Serialize)]
struct PdmReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    dims: [usize; 2],
    bases: [String; 2],
    matrix: JsonMatrix,
    eigenvalues: Vec<f64>,
    min_eigenvalue: f64,
    spatially_compatible: bool,
    negativity: f64,
    si: SiJson,
    bound: Option<BoundJson>,
    correlators: Vec<CorrelatorJson>,
}

fn run_pdm(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let (rho, ch) = (state(sc), channel(sc));
    let r = pdm_closed_form(rho, ch)?;
    let si = si_measure(&r, sc.p)?;
    let negativity = si_measure(&r, 1.0)?.value;
    let bound = if ch.is_square() {
        let b = check_bound(rho, ch)?;
        Some(BoundJson { t1: b.t1, reference: b.reference, bound_ok: b.bound_ok })
    } else {
        None
    };
    let table = exact_correlators(&r, sc.bases.0, sc.bases.1)?;
    let eig = r.eig();
    let report = PdmReport {
        kind: "pdm",
        name: sc.name.as_deref(),
        dims: [r.dims().0, r.dims().1],
        bases: [sc.bases.0.to_string(), sc.bases.1.to_string()],
        matrix: hermitian_json(r.matrix()),
        eigenvalues: eig.eigenvalues().to_vec(),
        min_eigenvalue: eig.min(),
        spatially_compatible: r.is_positive(),
        negativity,
        si: si_json(&si),
        bound,
        correlators: correlators_json(&table),
    };
    let mut files = vec![write_atomic(out, "pdm.json", &to_json_bytes(&report))?];
    files.push(write_atomic(out, "pdm.csv", &table_csv(&table)?)?);
    let mut text = String::new();
    let _ = writeln!(text, "eigenvalues: {}", join(eig.eigenvalues()));
    let _ = writeln!(text, "negativity (T_1): {negativity:.12}");
    let _ = writeln!(text, "T_{} = {:.12} ({})", sc.p, si.value, method_name(si.method));
    let _ = writeln!(text, "spatially compatible: {}", r.is_positive());
    Ok(RunSummary { files, text, failed: Vec::new() })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct CoefficientJson {
    label1: String,
    label2: String,
    coefficient: f64,
}

#[derive(Serialize)]
struct SampledJson {
    value: f64,
    stderr: f64,
    shots_per_pair: u64,
    seed: u64,
    generator: &'static str,
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    dims: [usize; 2],
    bases: [String; 2],
    policy: &'static str,
    pdm_eigenvalues: Vec<f64>,
    negativity: f64,
    witness: JsonMatrix,
    coefficients: Vec<CoefficientJson>,
    expectation_direct: f64,
    expectation_from_correlators: f64,
    sampled: Option<SampledJson>,
}

fn policy_name(p: &WitnessPolicy) -> &'static str {
    match p {
        WitnessPolicy::NegativeEigenspace => "negative_eigenspace",
        WitnessPolicy::MostNegative => "most_negative",
        WitnessPolicy::Custom(_) => "custom",
    }
}

fn witness_for(sc: &Scenario, r: &Pdm) -> CliResult<Witness> {
    let w = synthesize_witness_with(r, &sc.policy)?;
    if w.bases() == sc.bases {
        Ok(w)
    } else {
        Ok(Witness::with_bases(w.matrix().clone(), sc.bases.0, sc.bases.1)?)
    }
}

fn run_witness(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let (rho, ch) = (state(sc), channel(sc));
    let r = pdm_closed_form(rho, ch)?;
    let w = witness_for(sc, &r)?;
    let table = exact_correlators(&r, sc.bases.0, sc.bases.1)?;
    let from_table = evaluate_witness(&w, &table)?;
    let sampled = match sc.shots {
        Some(shots) => {
            let t = sample_table_parallel(rho, ch, sc, shots)?;
            let (value, stderr) = evaluate_witness_sampled(&w, &t)?;
            Some(SampledJson { value, stderr, shots_per_pair: shots, seed: sc.seed, generator: GENERATOR_ID })
        }
        None => None,
    };
    let report = WitnessReport {
        kind: "witness",
        name: sc.name.as_deref(),
        dims: [r.dims().0, r.dims().1],
        bases: [sc.bases.0.to_string(), sc.bases.1.to_string()],
        policy: policy_name(&sc.policy),
        pdm_eigenvalues: r.eig().eigenvalues().to_vec(),
        negativity: si_measure(&r, 1.0)?.value,
        witness: hermitian_json(w.matrix()),
        coefficients: w.coefficients().iter().map(|(a, b, c)| CoefficientJson { label1: a.clone(), label2: b.clone(), coefficient: *c }).collect(),
        expectation_direct: w.expectation(&r),
        expectation_from_correlators: from_table,
        sampled,
    };
    let mut text = String::new();
    let _ = writeln!(text, "<W>_t (exact correlators): {from_table:.12}");
    if let Some(s) = &report.sampled {
        let _ = writeln!(text, "<W>_t (sampled, {} shots/pair): {:.6} +/- {:.6}", s.shots_per_pair, s.value, s.stderr);
    }
    let files = vec![write_atomic(out, "witness.json", &to_json_bytes(&report))?];
    Ok(RunSummary { files, text, failed: Vec::new() })
}

#[derive(Serialize)]
struct NcgdJson {
    mode: &'static str,
    holds: bool,
    residual: f64,
    worst_point: Option<[f64; 2]>,
    points_tested: usize,
    summary: &'static str,
}

#[derive(Serialize)]
struct CounterexampleJson {
    probs: Vec<f64>,
    negativity: f64,
    failing_pair: Option<[usize; 2]>,
    failure_kind: Option<&'static str>,
}

#[derive(Serialize)]
struct ClassRow {
    class: &'static str,
    member: bool,
    residual: f64,
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    dim: usize,
    classes: Vec<ClassRow>,
    ncgd: NcgdJson,
    incoherent_counterexample: Option<CounterexampleJson>,
}

fn ncgd_mode_name(m: NcgdMode) -> &'static str {
    match m {
        NcgdMode::SingleChannelSurrogate => "single_channel_surrogate",
        NcgdMode::LiouvillianGrid => "liouvillian_grid",
        NcgdMode::DiscreteFamily => "discrete_family",
    }
}

fn failure_name(f: BlockFailure) -> &'static str {
    match f {
        BlockFailure::Support => "support",
        BlockFailure::Schur => "schur",
    }
}

fn run_classify(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let ch = channel(sc);
    let rep = classify_channel(ch, sc.ncgd.as_ref())?;
    let classes = vec![
        ClassRow { class: "OI", member: rep.is_oi, residual: rep.residuals.oi },
        ClassRow { class: "CE", member: rep.is_ce, residual: rep.residuals.ce },
        ClassRow { class: "CI", member: rep.is_ci, residual: rep.residuals.ci },
        ClassRow { class: "DI", member: rep.is_di, residual: rep.residuals.di },
        ClassRow { class: "NCGD", member: rep.is_ncgd, residual: rep.ncgd.residual },
    ];
    let cex = scan_incoherent_states(ch)?.map(|c| CounterexampleJson {
        probs: c.probs,
        negativity: c.negativity,
        failing_pair: c.block.failing_pair.map(|(i, j)| [i, j]),
        failure_kind: c.block.failure_kind.map(failure_name),
    });
    let mut text = String::new();
    let _ = writeln!(text, "{:<6} {:<7} {:>24}", "class", "member", "residual");
    for row in &classes {
        let _ = writeln!(text, "{:<6} {:<7} {:>24.16e}", row.class, if row.member { "yes" } else { "no" }, row.residual);
    }
    let _ = writeln!(text, "NCGD: {}", rep.ncgd.summary());
    match &cex {
        Some(c) => {
            let _ = writeln!(text, "incoherent state with SI: p = [{}], negativity {:.12}", join(&c.probs), c.negativity);
        }
        None => {
            let _ = writeln!(text, "no incoherent state with SI found on vertices and pair mixtures");
        }
    }
    let report = ClassifyReport {
        kind: "classify",
        name: sc.name.as_deref(),
        dim: ch.in_dim(),
        classes,
        ncgd: NcgdJson {
            mode: ncgd_mode_name(rep.ncgd.mode),
            holds: rep.ncgd.holds,
            residual: rep.ncgd.residual,
            worst_point: rep.ncgd.worst_point.map(|(a, b)| [a, b]),
            points_tested: rep.ncgd.points_tested,
            summary: rep.ncgd.summary(),
        },
        incoherent_counterexample: cex,
    };
    let files = vec![write_atomic(out, "classify.json", &to_json_bytes(&report))?];
    Ok(RunSummary { files, text, failed: Vec::new() })
}

#[derive(Serialize)]
struct LgJson {
    c12: f64,
    c23: f64,
    c13: f64,
    k: f64,
    violates_bound: bool,
}

#[derive(Serialize)]
struct LgSampledJson {
    c12: [f64; 2],
    c23: [f64; 2],
    c13: [f64; 2],
    k: f64,
    k_stderr: f64,
    shots: u64,
    seed: u64,
    generator: &'static str,
}

#[derive(Serialize)]
struct ComparisonJson {
    lg_violated: bool,
    max_k: f64,
    si_detected: bool,
    best_negativity: f64,
    best_state: Option<usize>,
    witness_coefficients: Option<Vec<CoefficientJson>>,
}

#[derive(Serialize)]
struct LgReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    q: JsonMatrix,
    result: LgJson,
    sampled: Option<LgSampledJson>,
    spatial_bound: [f64; 2],
    comparison: ComparisonJson,
}

fn run_lg(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let lg = sc.lg.as_ref().expect("validated lg scenario");
    let ch12 = channel(sc);
    let scenario = LgScenario::new(state(sc).clone(), ch12.clone(), lg.ch23.clone(), lg.q.clone())?;
    let res = lg_evaluate(&scenario)?;
    let sampled = match sc.shots {
        Some(shots) => {
            let s = lg_evaluate_sampled(&scenario, shots, sc.seed)?;
            Some(LgSampledJson {
                c12: [s.c12.mean, s.c12.stderr],
                c23: [s.c23.mean, s.c23.stderr],
                c13: [s.c13.mean, s.c13.stderr],
                k: s.k,
                k_stderr: s.k_stderr,
                shots,
                seed: sc.seed,
                generator: GENERATOR_ID,
            })
        }
        None => None,
    };
    let bound = spatial_lg_bound(&lg.q, &lg.q, &lg.q);
    let cmp = lg_vs_si_with_legs(ch12, &lg.ch23, &lg.states, std::slice::from_ref(&lg.q))?;
    let mut text = String::new();
    let _ = writeln!(text, "{:<28} {:<28}", "Leggett-Garg", "spatial incompatibility");
    let _ = writeln!(text, "{:<28} {:<28}", format!("K = {:.12}", res.k), format!("T_1 = {:.12}", si_measure(&pdm_closed_form(state(sc), ch12)?, 1.0)?.value));
    let _ = writeln!(
        text,
        "{:<28} {:<28}",
        format!("bound K <= 1: {}", if res.violates() { "violated" } else { "respected" }),
        format!("SI: {}", if cmp.si_detected { "detected" } else { "not detected" })
    );
    let _ = writeln!(
        text,
        "{:<28} {:<28}",
        format!("max K over states: {:.6}", cmp.max_k),
        format!("best negativity: {:.6}", cmp.best_negativity)
    );
    let report = LgReport {
        kind: "lg",
        name: sc.name.as_deref(),
        q: hermitian_json(lg.q.matrix()),
        result: LgJson { c12: res.c12, c23: res.c23, c13: res.c13, k: res.k, violates_bound: res.violates() },
        sampled,
        spatial_bound: [bound.min_k, bound.max_k],
        comparison: ComparisonJson {
            lg_violated: cmp.lg_violated,
            max_k: cmp.max_k,
            si_detected: cmp.si_detected,
            best_negativity: cmp.best_negativity,
            best_state: cmp.best_state,
            witness_coefficients: cmp.witness.as_ref().map(|w| {
                w.coefficients().iter().map(|(a, b, c)| CoefficientJson { label1: a.clone(), label2: b.clone(), coefficient: *c }).collect()
            }),
        },
    };
    let files = vec![write_atomic(out, "lg.json", &to_json_bytes(&report))?];
    Ok(RunSummary { files, text, failed: Vec::new() })
}

/// Samples every basis pair; pair `k` uses stream `k + 1` of the seed, so the
/// table does not depend on the number of worker threads.
pub fn sample_table_parallel(rho: &DensityMatrix, ch: &KrausChannel, sc: &Scenario, shots: u64) -> CliResult<CorrelatorTable> {
    let (b1, b2) = (Basis::new(sc.bases.0), Basis::new(sc.bases.1));
    let pairs: Vec<(usize, usize)> = (0..b1.len()).flat_map(|a| (0..b2.len()).map(move |b| (a, b))).collect();
    let estimates: Result<Vec<_>, _> = pairs
        .par_iter()
        .map(|&(a, b)| sample_pair(rho, ch, b1.element(a), b2.element(b), shots, &mut pair_rng(sc.seed, (a * b2.len() + b) as u64)))
        .collect();
    let mut table = CorrelatorTable::new(sc.bases.0, sc.bases.1);
    for (&(a, b), est) in pairs.iter().zip(estimates?) {
        table.insert_entry(b1.element(a).label(), b2.element(b).label(), CorrelatorEntry { value: est.mean, shots: Some(est.shots), stderr: Some(est.stderr) });
    }
    Ok(table)
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    dims: [usize; 2],
    bases: [String; 2],
    seed: u64,
    shots_per_pair: u64,
    generator: &'static str,
    reconstruction_frobenius_error: f64,
    reconstructed_min_eigenvalue: Option<f64>,
    reconstruction_note: Option<String>,
}

#[derive(Serialize)]
struct TimingReport {
    wall_seconds: f64,
}

fn run_simulate(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let (rho, ch) = (state(sc), channel(sc));
    let shots = sc.shots.expect("validated simulate scenario");
    let started = Instant::now();
    let table = sample_table_parallel(rho, ch, sc, shots)?;
    let wall = started.elapsed().as_secs_f64();
    let exact = pdm_closed_form(rho, ch)?;
    let (err, min_eig, note) = match pdm_from_correlators(&table) {
        Ok(r) => (Matrix::frobenius_norm(&(r.matrix().as_matrix() - exact.matrix().as_matrix())), Some(r.min_eigenvalue()), None),
        Err(e) => (f64::NAN, None, Some(e.to_string())),
    };
    let report = SimulateReport {
        kind: "simulate",
        name: sc.name.as_deref(),
        dims: [rho.dim(), ch.out_dim()],
        bases: [sc.bases.0.to_string(), sc.bases.1.to_string()],
        seed: sc.seed,
        shots_per_pair: shots,
        generator: GENERATOR_ID,
        reconstruction_frobenius_error: err,
        reconstructed_min_eigenvalue: min_eig,
        reconstruction_note: note,
    };
    let files = vec![
        write_atomic(out, "simulate.csv", &table_csv(&table)?)?,
        write_atomic(out, "simulate.json", &to_json_bytes(&report))?,
        write_atomic(out, "simulate.timing.json", &to_json_bytes(&TimingReport { wall_seconds: wall }))?,
    ];
    let text = format!("sampled {} pairs x {shots} shots; Frobenius error of reconstruction {err:.6e}\n", table.len());
    Ok(RunSummary { files, text, failed: Vec::new() })
}

/// Channel of a sweep family at parameter `s`.
pub fn family_channel(f: SweepFamily, s: f64) -> CliResult<KrausChannel> {
    let c = match f {
        SweepFamily::AmplitudeDamping => KrausChannel::amplitude_damping(s),
        SweepFamily::Depolarizing => KrausChannel::depolarizing(2, s),
        SweepFamily::RotationY => {
            let y = pdm_core::qobjects::pauli::y();
            KrausChannel::unitary(&Matrix::identity(2).scale_re(s.cos()) - &y.scale(pdm_core::matrix::c(0.0, s.sin())))
        }
        SweepFamily::PartialDephasing => {
            if !(0.0..=1.0).contains(&s) {
                return Err(CliError::validation(format!("field `sweep`: partial_dephasing needs parameters in [0, 1], got {s}")));
            }
            let keep = Matrix::identity(2).scale_re((1.0 - s).sqrt());
            let p0 = Matrix::diag_real(&[s.sqrt(), 0.0]);
            let p1 = Matrix::diag_real(&[0.0, s.sqrt()]);
            KrausChannel::new(vec![keep, p0, p1])
        }
    };
    c.map_err(|e| CliError::validation(format!("field `sweep`: {} at {s}: {e}", f.as_str())))
}

#[derive(Serialize)]
struct SweepRow {
    parameter: f64,
    min_eigenvalue: f64,
    negativity: f64,
    t_p: f64,
    bound_ok: bool,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    kind: &'static str,
    name: Option<&'a str>,
    family: &'static str,
    p: f64,
    points: usize,
    max_negativity: f64,
    argmax_parameter: f64,
}

fn sweep_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    (0..points).map(|k| start + (stop - start) * k as f64 / (points - 1) as f64).collect()
}

fn run_sweep(sc: &Scenario, out: &Path) -> CliResult<RunSummary> {
    let spec = sc.sweep.as_ref().expect("validated sweep scenario");
    let rho = state(sc);
    let grid = sweep_grid(spec.start, spec.stop, spec.points);
    let rows: CliResult<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&s| {
            let ch = family_channel(spec.family, s)?;
            let r = pdm_closed_form(rho, &ch)?;
            Ok(SweepRow {
                parameter: s,
                min_eigenvalue: r.min_eigenvalue(),
                negativity: si_measure(&r, 1.0)?.value,
                t_p: si_measure(&r, sc.p)?.value,
                bound_ok: check_bound(rho, &ch)?.bound_ok,
            })
        })
        .collect();
    let rows = rows?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "parameter", "p", "min_eigenvalue", "negativity", "t_p", "bound_ok"]).expect(IN_MEMORY);
    for r in &rows {
        w.write_record([
            spec.family.as_str().to_string(),
            fmt_f(r.parameter),
            fmt_f(sc.p),
            fmt_f(r.min_eigenvalue),
            fmt_f(r.negativity),
            fmt_f(r.t_p),
            r.bound_ok.to_string(),
        ])
        .expect(IN_MEMORY);
    }
    let bytes = w.into_inner().expect(IN_MEMORY);
    let best = rows.iter().max_by(|a, b| a.negativity.total_cmp(&b.negativity)).expect("at least one point");
    let report = SweepReport {
        kind: "sweep",
        name: sc.name.as_deref(),
        family: spec.family.as_str(),
        p: sc.p,
        points: rows.len(),
        max_negativity: best.negativity,
        argmax_parameter: best.parameter,
    };
    let files = vec![write_atomic(out, "sweep.csv", &bytes)?, write_atomic(out, "sweep.json", &to_json_bytes(&report))?];
    let text = format!("{} points of {}; max negativity {:.12} at {:.6}\n", rows.len(), spec.family.as_str(), best.negativity, best.parameter);
    Ok(RunSummary { files, text, failed: Vec::new() })
}

fn run_verify(sc: &Scenario, out: &Path, fault: Fault) -> CliResult<RunSummary> {
    let report = run_suite(sc.suite, sc.seed, fault);
    let files = vec![write_atomic(out, "verify.json", &to_json_bytes(&report))?];
    let failed = report.failed_names().into_iter().map(String::from).collect();
    Ok(RunSummary { files, text: report.render(), failed })
}
