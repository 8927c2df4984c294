use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix};
use crate::pdm::Pdm;
use crate::qobjects::{Basis, BasisKind};
use crate::tol;

/// One two-time correlator `⟨{A, B}⟩`, exact or estimated from `shots` samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelatorEntry {
    pub value: f64,
    pub shots: Option<u64>,
    pub stderr: Option<f64>,
}

impl CorrelatorEntry {
    pub fn exact(value: f64) -> Self {
        Self { value, shots: None, stderr: None }
    }
}

/// Correlators keyed by `(label₁, label₂)` over a pair of local bases.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    bases: (BasisKind, BasisKind),
    entries: BTreeMap<(String, String), CorrelatorEntry>,
}

impl CorrelatorTable {
    pub fn new(first: BasisKind, second: BasisKind) -> Self {
        Self { bases: (first, second), entries: BTreeMap::new() }
    }

    /// Default bases for the given local dimensions.
    pub fn for_dims(dims: (usize, usize)) -> Self {
        Self::new(BasisKind::for_dim(dims.0), BasisKind::for_dim(dims.1))
    }

    pub fn bases(&self) -> (BasisKind, BasisKind) {
        self.bases
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.bases.0.dim(), self.bases.1.dim())
    }

    pub fn insert(&mut self, a: &str, b: &str, value: f64) {
        self.insert_entry(a, b, CorrelatorEntry::exact(value));
    }

    pub fn insert_entry(&mut self, a: &str, b: &str, entry: CorrelatorEntry) {
        self.entries.insert((a.to_string(), b.to_string()), entry);
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.entry(a, b).map(|e| e.value)
    }

    pub fn entry(&self, a: &str, b: &str) -> Option<&CorrelatorEntry> {
        self.entries.get(&(a.to_string(), b.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &CorrelatorEntry)> {
        self.entries.iter().map(|((a, b), e)| (a.as_str(), b.as_str(), e))
    }

    /// Every basis pair, in basis order, with its entry if present.
    pub fn grid(&self) -> Vec<(String, String, Option<CorrelatorEntry>)> {
        let (b1, b2) = (Basis::new(self.bases.0), Basis::new(self.bases.1));
        let mut out = Vec::with_capacity(b1.len() * b2.len());
        for x in b1.elements() {
            for y in b2.elements() {
                out.push((x.label().to_string(), y.label().to_string(), self.entry(x.label(), y.label()).copied()));
            }
        }
        out
    }

    pub fn missing(&self) -> Vec<(String, String)> {
        self.grid().into_iter().filter(|(_, _, e)| e.is_none()).map(|(a, b, _)| (a, b)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.missing().is_empty()
    }
}

/// `t(a, b) = Tr[R (A_a ⊗ B_b)]` over the full basis grid.
pub fn exact_correlators(r: &Pdm, first: BasisKind, second: BasisKind) -> Result<CorrelatorTable> {
    if (first.dim(), second.dim()) != r.dims() {
        return Err(Error::DimensionMismatch(format!("bases {first} and {second} do not fit PDM dims {:?}", r.dims())));
    }
    let (b1, b2) = (Basis::new(first), Basis::new(second));
    let mut t = CorrelatorTable::new(first, second);
    for x in b1.elements() {
        for y in b2.elements() {
            let op = x.matrix().kron(y.matrix());
            t.insert(x.label(), y.label(), r.matrix().expectation(&op));
        }
    }
    Ok(t)
}

/// `R = Σ_ab t(a, b) Ã_a ⊗ B̃_b` with the dual frames of both bases.
pub fn pdm_from_correlators(t: &CorrelatorTable) -> Result<Pdm> {
    let missing = t.missing();
    if !missing.is_empty() {
        return Err(Error::IncompleteTable { missing });
    }
    let (b1, b2) = (Basis::new(t.bases.0), Basis::new(t.bases.1));
    let (d1, d2) = (b1.dim(), b2.dim());
    let mut acc = Matrix::zeros(d1 * d2, d1 * d2);
    for (ia, x) in b1.elements().iter().enumerate() {
        // Σ_b t(a, b) B̃_b first, then one Kronecker product per row
        let mut right = Matrix::zeros(d2, d2);
        for (ib, y) in b2.elements().iter().enumerate() {
            let v = t.get(x.label(), y.label()).expect("completeness checked");
            if v != 0.0 {
                right += &b2.dual(ib).scale_re(v);
            }
        }
        acc += &b1.dual(ia).kron(&right);
    }
    let mat = HermitianMatrix::hermitian_part(&acc);
    let trace = mat.trace_re();
    if (trace - 1.0).abs() > tol::SPECTRAL {
        return Err(Error::NotUnitTrace { trace });
    }
    Ok(Pdm::new_unchecked(mat, (d1, d2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdm::pdm_closed_form;
    use crate::qobjects::{DensityMatrix, KrausChannel};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    const Q: BasisKind = BasisKind::Pauli { n_qubits: 1 };

    #[test]
    fn identity_only_table_is_maximally_mixed() {
        let mut t = CorrelatorTable::new(Q, Q);
        for (a, b, _) in t.grid() {
            let v = if a == "I" && b == "I" { 1.0 } else { 0.0 };
            t.insert(&a, &b, v);
        }
        let r = pdm_from_correlators(&t).unwrap();
        assert!(r.matrix().max_abs_diff(&Matrix::identity(4).scale_re(0.25)) < 1e-15);
    }

    #[test]
    fn identity_channel_table() {
        let r = pdm_closed_form(&DensityMatrix::basis(2, 0), &KrausChannel::identity(2)).unwrap();
        let t = exact_correlators(&r, Q, Q).unwrap();
        for (a, b, e) in t.grid() {
            let expected = if matches!((a.as_str(), b.as_str()), ("I", "I") | ("X", "X") | ("Y", "Y") | ("Z", "Z") | ("I", "Z") | ("Z", "I")) { 1.0 } else { 0.0 };
            assert!((e.unwrap().value - expected).abs() < 1e-15, "({a},{b})");
        }
        let mut sparse = CorrelatorTable::new(Q, Q);
        for (a, b, _) in t.grid() {
            sparse.insert(&a, &b, 0.0);
        }
        for (a, b) in [("I", "I"), ("X", "X"), ("Y", "Y"), ("Z", "Z"), ("I", "Z"), ("Z", "I")] {
            sparse.insert(a, b, 1.0);
        }
        assert!(pdm_from_correlators(&sparse).unwrap().matrix().max_abs_diff(r.matrix()) < 1e-15);
    }

    #[test]
    fn plus_dephase_xx_vanishes() {
        let r = pdm_closed_form(&DensityMatrix::plus(), &KrausChannel::dephasing(2)).unwrap();
        let t = exact_correlators(&r, Q, Q).unwrap();
        assert!(t.get("X", "X").unwrap().abs() < 1e-15);
        assert!((t.get("X", "I").unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn incomplete_table_lists_missing_pairs() {
        let mut t = CorrelatorTable::new(Q, Q);
        t.insert("I", "I", 1.0);
        match pdm_from_correlators(&t) {
            Err(Error::IncompleteTable { missing }) => {
                assert_eq!(missing.len(), 15);
                assert_eq!(missing[0], ("I".to_string(), "X".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_all_basis_kinds() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for (d1, d2) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
            for kinds in [(BasisKind::for_dim(d1), BasisKind::for_dim(d2)), (BasisKind::LightTouch { dim: d1 }, BasisKind::LightTouch { dim: d2 })] {
                let rho = random::random_state(d1, &mut rng);
                let ch = random::random_channel(d1, d2, 4, &mut rng);
                let r = pdm_closed_form(&rho, &ch).unwrap();
                let t = exact_correlators(&r, kinds.0, kinds.1).unwrap();
                let back = pdm_from_correlators(&t).unwrap();
                assert!(back.matrix().max_abs_diff(r.matrix()) < 1e-12, "{kinds:?}");
            }
        }
    }

    #[test]
    fn basis_dimension_must_match() {
        let r = pdm_closed_form(&DensityMatrix::basis(2, 0), &KrausChannel::identity(2)).unwrap();
        assert!(exact_correlators(&r, BasisKind::LightTouch { dim: 3 }, Q).is_err());
    }
}
