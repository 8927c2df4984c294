//! Scenario files: JSON with a `version` field, unknown fields rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use pdm_core::coherence::NcgdProbe;
use pdm_core::leggett_garg::DichotomicObservable;
use pdm_core::matrix::HermitianMatrix;
use pdm_core::pdm::WitnessPolicy;
use pdm_core::qobjects::{lindblad_generator, BasisKind, DensityMatrix, KrausChannel};

use crate::error::{CliError, CliResult};
use crate::literal::{parse_channel, parse_hermitian, parse_matrix, parse_state};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Pdm,
    Witness,
    Classify,
    Lg,
    Simulate,
    Sweep,
    Verify,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pdm => "pdm",
            Kind::Witness => "witness",
            Kind::Classify => "classify",
            Kind::Lg => "lg",
            Kind::Simulate => "simulate",
            Kind::Sweep => "sweep",
            Kind::Verify => "verify",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    #[default]
    All,
    Pdm,
    Coherence,
    Lg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    #[default]
    NegativeEigenspace,
    MostNegative,
    Custom,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub version: u32,
    pub kind: Kind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub state: Option<Value>,
    #[serde(default)]
    pub channel: Option<Value>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub bases: Option<[String; 2]>,
    #[serde(default)]
    pub witness: Option<RawWitness>,
    #[serde(default)]
    pub lg: Option<RawLg>,
    #[serde(default)]
    pub ncgd: Option<RawNcgd>,
    #[serde(default)]
    pub sweep: Option<RawSweep>,
    #[serde(default)]
    pub suite: Option<Suite>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWitness {
    #[serde(default)]
    pub policy: PolicyName,
    #[serde(default)]
    pub matrix: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLg {
    #[serde(default)]
    pub ch23: Option<Value>,
    #[serde(default)]
    pub q: Option<Value>,
    #[serde(default)]
    pub states: Option<Vec<Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum RawNcgd {
    Lindblad {
        hamiltonian: Value,
        #[serde(default)]
        jumps: Vec<Value>,
    },
    Family(Vec<RawFamilyMember>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamilyMember {
    pub t: f64,
    pub channel: Value,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub family: SweepFamily,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

/// One-parameter channel families available to `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    AmplitudeDamping,
    Depolarizing,
    RotationY,
    /// `(1 - s)·identity + s·Δ` as a Kraus mixture.
    PartialDephasing,
}

impl SweepFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFamily::AmplitudeDamping => "amplitude_damping",
            SweepFamily::Depolarizing => "depolarizing",
            SweepFamily::RotationY => "rotation_y",
            SweepFamily::PartialDephasing => "partial_dephasing",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LgSpec {
    pub ch23: KrausChannel,
    pub q: DichotomicObservable,
    pub states: Vec<DensityMatrix>,
}

/// A validated scenario: every literal resolved and dimensions checked.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub kind: Kind,
    pub name: Option<String>,
    pub dim: usize,
    pub state: Option<DensityMatrix>,
    pub channel: Option<KrausChannel>,
    pub p: f64,
    pub shots: Option<u64>,
    pub seed: u64,
    pub bases: (BasisKind, BasisKind),
    pub policy: WitnessPolicy,
    pub lg: Option<LgSpec>,
    pub ncgd: Option<NcgdProbe>,
    pub sweep: Option<RawSweep>,
    pub suite: Suite,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

fn missing(field: &str, kind: Kind) -> CliError {
    CliError::validation(format!("missing field `{field}` (required for kind `{kind}`)"))
}

impl RawScenario {
    pub fn from_str(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::validation(e.to_string()))
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_str(&text).map_err(|e| match e {
            CliError::Validation(m) => CliError::validation(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Resolves literals and checks that the kind has everything it needs.
    /// `seed_override` replaces the file's seed.
    pub fn resolve(self, seed_override: Option<u64>) -> CliResult<Scenario> {
        let kind = self.kind;
        if self.version != CONFIG_VERSION {
            return Err(CliError::validation(format!("field `version`: unsupported version {}, expected {CONFIG_VERSION}", self.version)));
        }
        let needs_state = matches!(kind, Kind::Pdm | Kind::Witness | Kind::Lg | Kind::Simulate | Kind::Sweep);
        let needs_channel = matches!(kind, Kind::Pdm | Kind::Witness | Kind::Classify | Kind::Lg | Kind::Simulate);

        let state = match &self.state {
            Some(v) => Some(parse_state(v, self.dim, "state")?),
            None if needs_state => return Err(missing("state", kind)),
            None => None,
        };
        let dim = match (self.dim, &state) {
            (Some(d), Some(s)) if d != s.dim() => {
                return Err(CliError::validation(format!("field `dim`: {d} does not match the {}-dimensional state", s.dim())));
            }
            (Some(0), None) => return Err(CliError::validation("field `dim`: must be positive")),
            (Some(d), _) => d,
            (None, Some(s)) => s.dim(),
            (None, None) => 2,
        };
        let channel = match &self.channel {
            Some(v) => {
                let ch = parse_channel(v, dim, "channel")?;
                if ch.in_dim() != dim {
                    return Err(CliError::validation(format!("field `channel`: input dimension {} does not match dim {dim}", ch.in_dim())));
                }
                Some(ch)
            }
            None if needs_channel => return Err(missing("channel", kind)),
            None => None,
        };
        let out_dim = channel.as_ref().map_or(dim, KrausChannel::out_dim);

        let p = self.p.unwrap_or(if kind == Kind::Sweep { 2.0 } else { 1.0 });
        if !(p.is_finite() && p >= 1.0) {
            return Err(CliError::validation(format!("field `p`: need a finite p >= 1, got {p}")));
        }
        if self.shots == Some(0) {
            return Err(CliError::validation("field `shots`: must be positive"));
        }
        let shots = match (kind, self.shots) {
            (Kind::Simulate, None) => return Err(missing("shots", kind)),
            (_, s) => s,
        };

        let bases = match &self.bases {
            None => (BasisKind::for_dim(dim), BasisKind::for_dim(out_dim)),
            Some([a, b]) => {
                let parse = |s: &str, i: usize, want: usize| -> CliResult<BasisKind> {
                    let k: BasisKind = s.parse().map_err(|e| CliError::validation(format!("field `bases[{i}]`: {e}")))?;
                    if k.dim() != want {
                        return Err(CliError::validation(format!("field `bases[{i}]`: basis `{s}` has dimension {}, expected {want}", k.dim())));
                    }
                    Ok(k)
                };
                (parse(a, 0, dim)?, parse(b, 1, out_dim)?)
            }
        };

        let policy = match self.witness {
            None => WitnessPolicy::NegativeEigenspace,
            Some(RawWitness { policy: PolicyName::NegativeEigenspace, matrix: None }) => WitnessPolicy::NegativeEigenspace,
            Some(RawWitness { policy: PolicyName::MostNegative, matrix: None }) => WitnessPolicy::MostNegative,
            Some(RawWitness { policy: PolicyName::Custom, matrix: Some(m) }) => {
                let w = parse_hermitian(&m, "witness.matrix")?;
                if w.dim() != dim * out_dim {
                    return Err(CliError::validation(format!("field `witness.matrix`: dimension {} does not match {dim}x{out_dim}", w.dim())));
                }
                WitnessPolicy::Custom(w)
            }
            Some(RawWitness { policy: PolicyName::Custom, matrix: None }) => {
                return Err(CliError::validation("missing field `witness.matrix` (required for policy `custom`)"));
            }
            Some(RawWitness { matrix: Some(_), .. }) => {
                return Err(CliError::validation("field `witness.matrix`: only allowed with policy `custom`"));
            }
        };

        let lg = match (kind, self.lg) {
            (Kind::Lg, raw) => Some(resolve_lg(raw, channel.as_ref().expect("checked above"), dim)?),
            (_, Some(_)) => return Err(CliError::validation(format!("field `lg`: only allowed for kind `lg`, not `{kind}`"))),
            (_, None) => None,
        };
        if kind == Kind::Lg && out_dim != dim {
            return Err(CliError::validation("field `channel`: the LG legs must map the system to itself"));
        }

        let ncgd = match self.ncgd {
            None => None,
            Some(_) if kind != Kind::Classify => {
                return Err(CliError::validation(format!("field `ncgd`: only allowed for kind `classify`, not `{kind}`")));
            }
            Some(RawNcgd::Lindblad { hamiltonian, jumps }) => {
                let h = parse_hermitian(&hamiltonian, "ncgd.lindblad.hamiltonian")?;
                let jumps: CliResult<Vec<_>> = jumps.iter().enumerate().map(|(i, j)| parse_matrix(j, &format!("ncgd.lindblad.jumps[{i}]"))).collect();
                let g = lindblad_generator(&h, &jumps?).map_err(|e| CliError::validation(format!("field `ncgd.lindblad`: {e}")))?;
                if h.dim() != dim {
                    return Err(CliError::validation(format!("field `ncgd.lindblad.hamiltonian`: dimension {} does not match dim {dim}", h.dim())));
                }
                Some(NcgdProbe::Liouvillian(g))
            }
            Some(RawNcgd::Family(members)) => {
                if members.is_empty() {
                    return Err(CliError::validation("field `ncgd.family`: needs at least one member"));
                }
                let fam: CliResult<Vec<_>> = members
                    .iter()
                    .enumerate()
                    .map(|(i, m)| Ok((m.t, parse_channel(&m.channel, dim, &format!("ncgd.family[{i}].channel"))?)))
                    .collect();
                Some(NcgdProbe::Family(fam?))
            }
        };

        let sweep = match (kind, self.sweep) {
            (Kind::Sweep, None) => return Err(missing("sweep", kind)),
            (Kind::Sweep, Some(s)) => {
                if s.points == 0 || !s.start.is_finite() || !s.stop.is_finite() {
                    return Err(CliError::validation("field `sweep`: need points >= 1 and finite start/stop"));
                }
                if dim != 2 {
                    return Err(CliError::validation("field `sweep.family`: sweep families act on qubits"));
                }
                Some(s)
            }
            (_, Some(_)) => return Err(CliError::validation(format!("field `sweep`: only allowed for kind `sweep`, not `{kind}`"))),
            (_, None) => None,
        };
        if kind != Kind::Verify && self.suite.is_some() {
            return Err(CliError::validation(format!("field `suite`: only allowed for kind `verify`, not `{kind}`")));
        }

        Ok(Scenario {
            kind,
            name: self.name,
            dim,
            state,
            channel,
            p,
            shots,
            seed: seed_override.or(self.seed).unwrap_or(DEFAULT_SEED),
            bases,
            policy,
            lg,
            ncgd,
            sweep,
            suite: self.suite.unwrap_or_default(),
        })
    }
}

fn resolve_lg(raw: Option<RawLg>, ch12: &KrausChannel, dim: usize) -> CliResult<LgSpec> {
    let raw = raw.unwrap_or(RawLg { ch23: None, q: None, states: None });
    let ch23 = match &raw.ch23 {
        Some(v) => parse_channel(v, dim, "lg.ch23")?,
        None => ch12.clone(),
    };
    if ch23.out_dim() != dim {
        return Err(CliError::validation(format!("field `lg.ch23`: output dimension {} does not match dim {dim}", ch23.out_dim())));
    }
    let qmat = match &raw.q {
        Some(v) => parse_hermitian(v, "lg.q")?,
        None => HermitianMatrix::diag(&(0..dim).map(|k| if k == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>()),
    };
    if qmat.dim() != dim {
        return Err(CliError::validation(format!("field `lg.q`: dimension {} does not match dim {dim}", qmat.dim())));
    }
    let q = DichotomicObservable::new("Q", qmat).map_err(|e| CliError::validation(format!("field `lg.q`: {e}")))?;
    let states = match &raw.states {
        None => pdm_core::leggett_garg::default_incoherent_states(dim),
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for (i, v) in list.iter().enumerate() {
                let field = format!("lg.states[{i}]");
                let s = parse_state(v, Some(dim), &field)?;
                if s.dim() != dim || !s.is_incoherent() {
                    return Err(CliError::validation(format!("field `{field}`: need an incoherent {dim}-dimensional state")));
                }
                out.push(s);
            }
            out
        }
    };
    Ok(LgSpec { ch23, q, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> CliResult<Scenario> {
        RawScenario::from_str(text)?.resolve(None)
    }

    #[test]
    fn minimal_pdm() {
        let s = resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0", "channel": "identity"}"#).unwrap();
        assert_eq!((s.kind, s.dim, s.p, s.seed), (Kind::Pdm, 2, 1.0, DEFAULT_SEED));
        assert_eq!(s.bases, (BasisKind::Pauli { n_qubits: 1 }, BasisKind::Pauli { n_qubits: 1 }));
    }

    #[test]
    fn missing_channel_names_field() {
        let e = resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0"}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("`channel`"), "{e}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0", "channel": "identity", "chanel": 1}"#).unwrap_err();
        assert!(e.to_string().contains("chanel"), "{e}");
        let e = resolve(r#"{"version": 1, "kind": "lg", "state": "ket0", "channel": "identity", "lg": {"qq": "Z"}}"#).unwrap_err();
        assert!(e.to_string().contains("qq"), "{e}");
    }

    #[test]
    fn version_and_dims_checked() {
        assert!(resolve(r#"{"version": 2, "kind": "pdm", "state": "ket0", "channel": "identity"}"#).is_err());
        assert!(resolve(r#"{"kind": "pdm", "state": "ket0", "channel": "identity"}"#).unwrap_err().to_string().contains("version"));
        assert!(resolve(r#"{"version": 1, "kind": "pdm", "dim": 3, "state": "plus", "channel": "identity"}"#).is_err());
        assert!(resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0", "channel": "identity", "bases": ["pauli:1", "pauli:2"]}"#).is_err());
        assert!(resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0", "channel": "identity", "p": 0.5}"#).is_err());
    }

    #[test]
    fn seed_override_wins() {
        let raw = RawScenario::from_str(r#"{"version": 1, "kind": "simulate", "state": "ket0", "channel": "identity", "shots": 10, "seed": 3}"#).unwrap();
        assert_eq!(raw.resolve(Some(9)).unwrap().seed, 9);
    }

    #[test]
    fn lg_defaults_and_validation() {
        let s = resolve(r#"{"version": 1, "kind": "lg", "state": "ket0", "channel": "rotation_y(0.5)"}"#).unwrap();
        let lg = s.lg.unwrap();
        assert_eq!(lg.states.len(), 3);
        assert!(lg.q.matrix().max_abs_diff(&HermitianMatrix::diag(&[1.0, -1.0])) < 1e-15);
        let bad = r#"{"version": 1, "kind": "lg", "state": "ket0", "channel": "identity", "lg": {"q": [[1, 0], [0, 0.5]]}}"#;
        assert!(resolve(bad).unwrap_err().to_string().contains("lg.q"));
        let coherent = r#"{"version": 1, "kind": "lg", "state": "ket0", "channel": "identity", "lg": {"states": ["plus"]}}"#;
        assert!(resolve(coherent).is_err());
    }

    #[test]
    fn ncgd_and_sweep_sections() {
        let s = resolve(r#"{"version": 1, "kind": "classify", "channel": "dephase", "ncgd": {"lindblad": {"hamiltonian": "Z", "jumps": [[[1, 0], [0, -1]]]}}}"#).unwrap();
        assert!(matches!(s.ncgd, Some(NcgdProbe::Liouvillian(_))));
        let s = resolve(r#"{"version": 1, "kind": "sweep", "state": "plus", "sweep": {"family": "partial_dephasing", "start": 0, "stop": 1, "points": 5}}"#).unwrap();
        assert_eq!(s.p, 2.0);
        assert!(resolve(r#"{"version": 1, "kind": "sweep", "state": "plus"}"#).unwrap_err().to_string().contains("`sweep`"));
        assert!(resolve(r#"{"version": 1, "kind": "pdm", "state": "ket0", "channel": "identity", "suite": "all"}"#).is_err());
    }

    #[test]
    fn custom_witness() {
        let ok = r#"{"version": 1, "kind": "witness", "state": "ket0", "channel": "identity",
                     "witness": {"policy": "custom", "matrix": [[0,0,0,0],[0,0.5,-0.5,0],[0,-0.5,0.5,0],[0,0,0,0]]}}"#;
        assert!(matches!(resolve(ok).unwrap().policy, WitnessPolicy::Custom(_)));
        let missing = r#"{"version": 1, "kind": "witness", "state": "ket0", "channel": "identity", "witness": {"policy": "custom"}}"#;
        assert!(resolve(missing).is_err());
    }
}
