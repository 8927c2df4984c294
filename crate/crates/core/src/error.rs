use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a density matrix: {0}")]
    NotADensityMatrix(String),

    #[error("not a unit-trace operator (trace {trace})")]
    NotUnitTrace { trace: f64 },

    #[error("Kraus operators are not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid norm order p = {0}; need a finite p >= 1")]
    InvalidP(f64),

    #[error("correlator table is missing {} pair(s): {}", .missing.len(), fmt_pairs(.missing))]
    IncompleteTable { missing: Vec<(String, String)> },

    #[error("operator has no eigenvalue below -1e-10; nothing to witness")]
    NotSpatiallyIncompatible,

    #[error("not a valid witness: {0}")]
    NotAWitness(String),

    #[error("stochastic matrix has no row separating the chosen columns")]
    NoAsymmetricColumn,

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn fmt_pairs(pairs: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, (a, b)) in pairs.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        if k == 8 {
            out.push_str("...");
            break;
        }
        out.push('(');
        out.push_str(a);
        out.push(',');
        out.push_str(b);
        out.push(')');
    }
    out
}
