//! State, channel, matrix and observable literals as they appear in scenario
//! files. Every parser takes the dotted field path so that diagnostics name
//! the offending entry.

use serde_json::Value;

use pdm_core::matrix::{c, HermitianMatrix, Matrix, C64};
use pdm_core::qobjects::{DensityMatrix, KrausChannel, PauliString};

use crate::error::{CliError, CliResult};

fn err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::validation(format!("field `{field}`: {msg}"))
}

fn core_err(field: &str) -> impl Fn(pdm_core::Error) -> CliError + '_ {
    move |e| err(field, e)
}

/// `[re, im]` or a bare real number.
pub fn parse_complex(v: &Value, field: &str) -> CliResult<C64> {
    match v {
        Value::Number(n) => Ok(c(n.as_f64().ok_or_else(|| err(field, "number out of range"))?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| err(field, "expected [re, im] with numeric parts"))?;
            let im = pair[1].as_f64().ok_or_else(|| err(field, "expected [re, im] with numeric parts"))?;
            Ok(c(re, im))
        }
        _ => Err(err(field, "expected a complex number written as [re, im]")),
    }
}

/// Rows of complex entries.
pub fn parse_matrix(v: &Value, field: &str) -> CliResult<Matrix> {
    let rows = v.as_array().ok_or_else(|| err(field, "expected a matrix as an array of rows"))?;
    if rows.is_empty() {
        return Err(err(field, "matrix has no rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row.as_array().ok_or_else(|| err(&format!("{field}[{i}]"), "expected a row array"))?;
        let row: CliResult<Vec<C64>> = entries.iter().enumerate().map(|(j, x)| parse_complex(x, &format!("{field}[{i}][{j}]"))).collect();
        parsed.push(row?);
    }
    Matrix::from_rows(&parsed).map_err(core_err(field))
}

fn parse_call<'a>(s: &'a str, field: &str) -> CliResult<(&'a str, Option<f64>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s, None));
    };
    let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| err(field, format!("unbalanced parentheses in `{s}`")))?;
    let arg: f64 = inner.trim().parse().map_err(|_| err(field, format!("`{inner}` is not a number")))?;
    Ok((s[..open].trim(), Some(arg)))
}

fn require_arg(name: &str, arg: Option<f64>, field: &str) -> CliResult<f64> {
    arg.ok_or_else(|| err(field, format!("`{name}` needs a parameter, e.g. `{name}(0.5)`")))
}

/// Named states (`ket<k>`, `plus`, `minus`, `mixed`) or one of
/// `{"matrix": M}`, `{"diagonal": [p..]}`, `{"pure": [c..]}`. `dim` sizes
/// the named states that need it.
pub fn parse_state(v: &Value, dim: Option<usize>, field: &str) -> CliResult<DensityMatrix> {
    match v {
        Value::String(name) => {
            let d = dim.unwrap_or(2);
            match name.as_str() {
                "plus" | "minus" if d != 2 => Err(err(field, format!("`{name}` is a qubit state but dim = {d}"))),
                "plus" => Ok(DensityMatrix::plus()),
                "minus" => Ok(DensityMatrix::minus()),
                "mixed" => Ok(DensityMatrix::maximally_mixed(d)),
                other => {
                    let k: usize = other
                        .strip_prefix("ket")
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| err(field, format!("unknown state `{other}`; expected ket<k>, plus, minus, mixed or an object")))?;
                    if k >= d {
                        return Err(err(field, format!("`{other}` needs dim > {k}, got {d}")));
                    }
                    Ok(DensityMatrix::basis(d, k))
                }
            }
        }
        Value::Object(map) if map.len() == 1 => {
            let (key, inner) = map.iter().next().expect("one entry");
            let sub = format!("{field}.{key}");
            match key.as_str() {
                "matrix" => DensityMatrix::from_matrix(parse_matrix(inner, &sub)?).map_err(core_err(&sub)),
                "diagonal" => {
                    let probs: Option<Vec<f64>> = inner.as_array().map(|a| a.iter().map(Value::as_f64).collect()).unwrap_or(None);
                    DensityMatrix::diagonal(&probs.ok_or_else(|| err(&sub, "expected an array of probabilities"))?).map_err(core_err(&sub))
                }
                "pure" => {
                    let amps = inner.as_array().ok_or_else(|| err(&sub, "expected an array of amplitudes"))?;
                    let psi: CliResult<Vec<C64>> = amps.iter().enumerate().map(|(i, a)| parse_complex(a, &format!("{sub}[{i}]"))).collect();
                    DensityMatrix::pure(&psi?).map_err(core_err(&sub))
                }
                other => Err(err(field, format!("unknown state form `{other}`; expected matrix, diagonal or pure"))),
            }
        }
        _ => Err(err(field, "expected a state name or a single-key object")),
    }
}

fn rotation(axis: Matrix, theta: f64) -> Matrix {
    &Matrix::identity(2).scale_re(theta.cos()) - &axis.scale(c(0.0, theta.sin()))
}

/// Named channels (`identity`, `dephase`, `amplitude_damping(γ)`,
/// `depolarizing(p)`, `rotation_x(θ)`, `rotation_y(θ)`, `rotation_z(θ)`) or
/// `{"unitary": M}` / `{"kraus": [M..]}`. Rotations are `exp(-iθσ)`.
pub fn parse_channel(v: &Value, dim: usize, field: &str) -> CliResult<KrausChannel> {
    match v {
        Value::String(s) => {
            let (name, arg) = parse_call(s, field)?;
            let qubit_only = |n: &str| if dim == 2 { Ok(()) } else { Err(err(field, format!("`{n}` acts on qubits but dim = {dim}"))) };
            match name {
                "identity" => Ok(KrausChannel::identity(dim)),
                "dephase" | "dephasing" => Ok(KrausChannel::dephasing(dim)),
                "amplitude_damping" => {
                    qubit_only(name)?;
                    KrausChannel::amplitude_damping(require_arg(name, arg, field)?).map_err(core_err(field))
                }
                "depolarizing" => KrausChannel::depolarizing(dim, require_arg(name, arg, field)?).map_err(core_err(field)),
                "rotation_x" | "rotation_y" | "rotation_z" => {
                    qubit_only(name)?;
                    let axis = match name {
                        "rotation_x" => pdm_core::qobjects::pauli::x(),
                        "rotation_y" => pdm_core::qobjects::pauli::y(),
                        _ => pdm_core::qobjects::pauli::z(),
                    };
                    KrausChannel::unitary(rotation(axis, require_arg(name, arg, field)?)).map_err(core_err(field))
                }
                other => Err(err(
                    field,
                    format!("unknown channel `{other}`; expected identity, dephase, amplitude_damping(g), depolarizing(p), rotation_[xyz](t), or an object"),
                )),
            }
        }
        Value::Object(map) if map.len() == 1 => {
            let (key, inner) = map.iter().next().expect("one entry");
            let sub = format!("{field}.{key}");
            match key.as_str() {
                "unitary" => KrausChannel::unitary(parse_matrix(inner, &sub)?).map_err(core_err(&sub)),
                "kraus" => {
                    let ops = inner.as_array().ok_or_else(|| err(&sub, "expected a list of Kraus matrices"))?;
                    let ops: CliResult<Vec<Matrix>> = ops.iter().enumerate().map(|(i, m)| parse_matrix(m, &format!("{sub}[{i}]"))).collect();
                    KrausChannel::new(ops?).map_err(core_err(&sub))
                }
                other => Err(err(field, format!("unknown channel form `{other}`; expected unitary or kraus"))),
            }
        }
        _ => Err(err(field, "expected a channel name or a single-key object")),
    }
}

/// A Pauli label such as `"Z"` or `"XZ"`, or a Hermitian matrix.
pub fn parse_hermitian(v: &Value, field: &str) -> CliResult<HermitianMatrix> {
    match v {
        Value::String(label) => Ok(PauliString::parse(label).map_err(core_err(field))?.matrix()),
        _ => HermitianMatrix::new(parse_matrix(v, field)?).map_err(core_err(field)),
    }
}
