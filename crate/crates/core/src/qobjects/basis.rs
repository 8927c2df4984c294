//! Light-touch observables and tomographically complete local bases.
//!
//! A light-touch observable has spectrum `{λ}` or `{±λ}`. Measuring one with
//! projectors onto its `±λ` eigenspaces makes the two-time correlator equal
//! `Tr[R (A ⊗ B)]` for the closed-form PDM, so a complete set of them is
//! enough for PDM tomography in any dimension. Pauli strings are the qubit
//! special case.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::pseudo_inverse;
use crate::matrix::{c, HermitianMatrix, Matrix, ONE};
use crate::qobjects::pauli::pauli_basis;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Spectrum `{λ}`: the observable is `λ·I`.
    Single,
    /// Spectrum `{±λ}`.
    PlusMinus,
}

#[derive(Clone, Debug)]
pub struct LightTouchObservable {
    label: String,
    mat: HermitianMatrix,
    lambda: f64,
    kind: SpectrumKind,
}

impl LightTouchObservable {
    /// Validates the spectrum numerically.
    pub fn new(label: impl Into<String>, mat: HermitianMatrix) -> Result<Self> {
        let e = mat.eig();
        let lambda = e.eigenvalues().iter().fold(0.0f64, |a, l| a.max(l.abs()));
        if lambda <= tol::SPECTRAL {
            return Err(Error::InvalidArgument("light-touch observable needs a positive λ".into()));
        }
        if e.eigenvalues().iter().any(|l| (l.abs() - lambda).abs() > tol::SPECTRAL) {
            return Err(Error::InvalidArgument(format!("spectrum {:?} is not {{λ}} or {{±λ}}", e.eigenvalues())));
        }
        let kind = if e.min() < 0.0 {
            SpectrumKind::PlusMinus
        } else {
            SpectrumKind::Single
        };
        Ok(Self { label: label.into(), mat, lambda, kind })
    }

    pub(crate) fn from_parts(label: String, mat: HermitianMatrix, lambda: f64, kind: SpectrumKind) -> Self {
        Self { label, mat, lambda, kind }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// A tomographically complete set of light-touch observables for one time slot.
///
/// For `d >= 3`:
/// * identity (`I`),
/// * for each pair `i < j`, `X{i}_{j} = |i⟩⟨j| + |j⟩⟨i| + P⊥` and
///   `Y{i}_{j} = -i|i⟩⟨j| + i|j⟩⟨i| + P⊥` with `P⊥ = I - |i⟩⟨i| - |j⟩⟨j|`,
/// * `d - 1` diagonal ±1 observables: Sylvester-Hadamard rows when `d` is a
///   power of two (`H{k}`), otherwise `Z{k} = I - 2|k⟩⟨k|` for `k >= 1`.
///
/// For `d = 2` the set is exactly the Pauli basis `I, X, Y, Z`.
pub fn light_touch_basis(d: usize) -> Vec<LightTouchObservable> {
    assert!(d >= 2, "light-touch basis needs d >= 2");
    if d == 2 {
        return pauli_basis(1).iter().map(|p| p.to_observable()).collect();
    }
    let mut out = Vec::with_capacity(d * d);
    out.push(LightTouchObservable::from_parts("I".into(), HermitianMatrix::identity(d), 1.0, SpectrumKind::Single));
    for i in 0..d {
        for j in (i + 1)..d {
            let mut perp = Matrix::identity(d);
            perp[(i, i)] = c(0.0, 0.0);
            perp[(j, j)] = c(0.0, 0.0);
            let mut xm = perp.clone();
            xm[(i, j)] = ONE;
            xm[(j, i)] = ONE;
            let mut ym = perp;
            ym[(i, j)] = c(0.0, -1.0);
            ym[(j, i)] = c(0.0, 1.0);
            for (name, m) in [("X", xm), ("Y", ym)] {
                let h = HermitianMatrix::new(m).expect("constructed Hermitian");
                out.push(LightTouchObservable::from_parts(format!("{name}{i}_{j}"), h, 1.0, SpectrumKind::PlusMinus));
            }
        }
    }
    if d.is_power_of_two() {
        for k in 1..d {
            let diag: Vec<f64> = (0..d).map(|i| if (i & k).count_ones() % 2 == 0 { 1.0 } else { -1.0 }).collect();
            out.push(LightTouchObservable::from_parts(format!("H{k}"), HermitianMatrix::diag(&diag), 1.0, SpectrumKind::PlusMinus));
        }
    } else {
        for k in 1..d {
            let diag: Vec<f64> = (0..d).map(|i| if i == k { -1.0 } else { 1.0 }).collect();
            out.push(LightTouchObservable::from_parts(format!("Z{k}"), HermitianMatrix::diag(&diag), 1.0, SpectrumKind::PlusMinus));
        }
    }
    out
}

/// Which observable family a basis uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKind {
    Pauli { n_qubits: usize },
    LightTouch { dim: usize },
}

impl BasisKind {
    /// Pauli strings when `d` is a power of two, light-touch otherwise.
    pub fn for_dim(d: usize) -> Self {
        if d >= 2 && d.is_power_of_two() {
            BasisKind::Pauli { n_qubits: d.trailing_zeros() as usize }
        } else {
            BasisKind::LightTouch { dim: d }
        }
    }

    pub fn dim(self) -> usize {
        match self {
            BasisKind::Pauli { n_qubits } => 1 << n_qubits,
            BasisKind::LightTouch { dim } => dim,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Pauli { n_qubits } => write!(f, "pauli:{n_qubits}"),
            BasisKind::LightTouch { dim } => write!(f, "light_touch:{dim}"),
        }
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').ok_or_else(|| Error::InvalidArgument(format!("basis descriptor {s:?} lacks ':'")))?;
        let n: usize = arg.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad basis size in {s:?}")))?;
        match name.trim() {
            "pauli" if n >= 1 => Ok(BasisKind::Pauli { n_qubits: n }),
            "light_touch" if n >= 2 => Ok(BasisKind::LightTouch { dim: n }),
            _ => Err(Error::InvalidArgument(format!("unknown basis descriptor {s:?}"))),
        }
    }
}

/// Observables together with their dual frame `Ã_a = Σ_c (G⁻¹)_{ac} A_c`,
/// where `G_{ac} = Tr[A_a A_c]`. Then `M = Σ_a Tr[M A_a] Ã_a` for any operator.
#[derive(Clone, Debug)]
pub struct Basis {
    kind: BasisKind,
    elements: Vec<LightTouchObservable>,
    duals: Vec<Matrix>,
    gram_rank: usize,
}

impl Basis {
    pub fn new(kind: BasisKind) -> Self {
        let elements: Vec<LightTouchObservable> = match kind {
            BasisKind::Pauli { n_qubits } => pauli_basis(n_qubits).iter().map(|p| p.to_observable()).collect(),
            BasisKind::LightTouch { dim } => light_touch_basis(dim),
        };
        let n = elements.len();
        let gram = Matrix::from_fn(n, n, |a, b| c(elements[a].matrix().expectation(elements[b].matrix()), 0.0));
        let gram = HermitianMatrix::new(gram).expect("Gram matrix of Hermitian operators is real symmetric");
        let spectrum = gram.eig();
        let top = spectrum.max();
        let gram_rank = spectrum.eigenvalues().iter().filter(|&&l| l > 1e-10 * top).count();
        let ginv = pseudo_inverse(&gram, tol::RANK);
        let d = kind.dim();
        let duals = (0..n)
            .map(|a| {
                let mut acc = Matrix::zeros(d, d);
                for (cidx, el) in elements.iter().enumerate() {
                    let w = ginv[(a, cidx)].re;
                    if w != 0.0 {
                        acc += &el.matrix().scale_re(w);
                    }
                }
                acc
            })
            .collect();
        Self { kind, elements, duals, gram_rank }
    }

    pub fn pauli(n_qubits: usize) -> Self {
        Self::new(BasisKind::Pauli { n_qubits })
    }

    pub fn light_touch(dim: usize) -> Self {
        Self::new(BasisKind::LightTouch { dim })
    }

    pub fn for_dim(d: usize) -> Self {
        Self::new(BasisKind::for_dim(d))
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[LightTouchObservable] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &LightTouchObservable {
        &self.elements[k]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label() == label)
    }

    pub fn dual(&self, k: usize) -> &Matrix {
        &self.duals[k]
    }

    /// Rank of the Gram matrix of the vectorized observables.
    pub fn gram_rank(&self) -> usize {
        self.gram_rank
    }

    pub fn is_complete(&self) -> bool {
        self.gram_rank == self.dim() * self.dim()
    }

    /// Coefficients `c_a` with `m = Σ_a c_a A_a`.
    pub fn expand(&self, m: &Matrix) -> Vec<f64> {
        self.duals.iter().map(|dual| m.trace_product(dual).re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn rank_oracle(ops: &[LightTouchObservable]) -> usize {
        // Gaussian elimination on real vectorizations [Re m; Im m]
        let d = ops[0].dim();
        let mut rows: Vec<Vec<f64>> = ops
            .iter()
            .map(|o| {
                let m = o.matrix();
                let mut v: Vec<f64> = m.as_slice().iter().map(|z| z.re).collect();
                v.extend(m.as_slice().iter().map(|z| z.im));
                v
            })
            .collect();
        let cols = 2 * d * d;
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())) else { break };
            if rows[piv][col].abs() < 1e-9 {
                continue;
            }
            rows.swap(rank, piv);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank {
                    let f = row[col] / pivot_row[col];
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn qubit_light_touch_is_pauli() {
        let basis = light_touch_basis(2);
        let labels: Vec<&str> = basis.iter().map(|o| o.label()).collect();
        assert_eq!(labels, ["I", "X", "Y", "Z"]);
    }

    #[test]
    fn qutrit_basis_is_complete() {
        let b = light_touch_basis(3);
        assert_eq!(b.len(), 9);
        assert_eq!(rank_oracle(&b), 9);
        assert_eq!(Basis::light_touch(3).gram_rank(), 9);
    }

    #[test]
    fn members_have_light_touch_spectra() {
        for d in 2..=5 {
            let basis = light_touch_basis(d);
            assert_eq!(rank_oracle(&basis), d * d, "d = {d}");
            for obs in basis {
                let checked = LightTouchObservable::new(obs.label(), obs.matrix().clone()).unwrap();
                assert_eq!(checked.kind(), obs.kind(), "{}", obs.label());
                assert!((checked.lambda() - obs.lambda()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_frame_expands_operators() {
        for kind in [BasisKind::Pauli { n_qubits: 2 }, BasisKind::LightTouch { dim: 3 }] {
            let b = Basis::new(kind);
            let d = b.dim();
            let m = Matrix::from_fn(d, d, |i, j| c((i * 3 + j) as f64 * 0.1, i as f64 - j as f64));
            let coeffs = b.expand(&m);
            let mut back = Matrix::zeros(d, d);
            for (k, w) in coeffs.iter().enumerate() {
                back += &b.element(k).matrix().scale_re(*w);
            }
            // m is Hermitian only on its Hermitian part, expansion with real coefficients recovers that part
            let herm = HermitianMatrix::hermitian_part(&m);
            assert!(back.max_abs_diff(&herm) < 1e-12, "{kind}");
        }
    }

    #[test]
    fn rejects_non_light_touch() {
        assert!(LightTouchObservable::new("bad", HermitianMatrix::diag(&[1.0, 0.5])).is_err());
        assert!(LightTouchObservable::new("zero", HermitianMatrix::diag(&[0.0, 0.0])).is_err());
        let ok = LightTouchObservable::new("twoZ", HermitianMatrix::diag(&[2.0, -2.0])).unwrap();
        assert_eq!(ok.kind(), SpectrumKind::PlusMinus);
        assert!((ok.lambda() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn basis_kind_round_trip() {
        for k in [BasisKind::Pauli { n_qubits: 2 }, BasisKind::LightTouch { dim: 3 }] {
            assert_eq!(k.to_string().parse::<BasisKind>().unwrap(), k);
        }
        assert_eq!(BasisKind::for_dim(4), BasisKind::Pauli { n_qubits: 2 });
        assert_eq!(BasisKind::for_dim(3), BasisKind::LightTouch { dim: 3 });
        assert!("pauli:x".parse::<BasisKind>().is_err());
    }
}
