use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix};
use crate::pdm::{CorrelatorTable, Pdm};
use crate::qobjects::{Basis, BasisKind};
use crate::tol;

/// Coefficients with magnitude at or below this are not required in a table.
const COEFF_FLOOR: f64 = 1e-13;

/// Which positive semidefinite operator to build from a PDM.
#[derive(Clone, Debug, Default)]
pub enum WitnessPolicy {
    /// Projector onto the span of all eigenvectors with eigenvalue below `-1e-10`.
    #[default]
    NegativeEigenspace,
    /// Projector onto the single most negative eigenvector.
    MostNegative,
    /// A caller-supplied operator, accepted only if it is PSD and detects the PDM.
    Custom(HermitianMatrix),
}

/// Positive semidefinite `W` with `W = Σ a_ab A_a ⊗ B_b`.
///
/// For Pauli bases `a_ab = Tr[W (σ_a ⊗ σ_b)] / (d₁ d₂)`; in general the
/// coefficients come from the dual frames. The expectation on a PDM is then
/// `Tr[W R] = Σ a_ab t(a, b)` with `t(a, b) = ⟨{A_a, B_b}⟩`.
#[derive(Clone, Debug)]
pub struct Witness {
    mat: HermitianMatrix,
    dims: (usize, usize),
    bases: (BasisKind, BasisKind),
    coeffs: Vec<(String, String, f64)>,
}

impl Witness {
    /// Validates positive semidefiniteness and expands in the default bases.
    pub fn new(mat: HermitianMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::with_bases(mat, BasisKind::for_dim(dims.0), BasisKind::for_dim(dims.1))
    }

    pub fn with_bases(mat: HermitianMatrix, first: BasisKind, second: BasisKind) -> Result<Self> {
        let dims = (first.dim(), second.dim());
        if mat.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch(format!("witness of dimension {} for bases {first} and {second}", mat.dim())));
        }
        let min = mat.min_eigenvalue();
        if min < -tol::NEGATIVITY {
            return Err(Error::NotAWitness(format!("minimum eigenvalue {min:e} is negative")));
        }
        let (b1, b2) = (Basis::new(first), Basis::new(second));
        let mut coeffs = Vec::with_capacity(b1.len() * b2.len());
        for (ia, x) in b1.elements().iter().enumerate() {
            for (ib, y) in b2.elements().iter().enumerate() {
                let a = mat.trace_product(&b1.dual(ia).kron(b2.dual(ib))).re;
                coeffs.push((x.label().to_string(), y.label().to_string(), a));
            }
        }
        Ok(Self { mat, dims, bases: (first, second), coeffs })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn bases(&self) -> (BasisKind, BasisKind) {
        self.bases
    }

    /// Every coefficient over the basis grid, in basis order.
    pub fn coefficients(&self) -> &[(String, String, f64)] {
        &self.coeffs
    }

    pub fn coefficient(&self, a: &str, b: &str) -> Option<f64> {
        self.coeffs.iter().find(|(x, y, _)| x == a && y == b).map(|c| c.2)
    }

    /// `Σ a_ab A_a ⊗ B_b`, which reproduces the stored matrix.
    pub fn reconstruct(&self) -> Matrix {
        let (b1, b2) = (Basis::new(self.bases.0), Basis::new(self.bases.1));
        let n = self.mat.dim();
        let mut acc = Matrix::zeros(n, n);
        let mut it = self.coeffs.iter();
        for x in b1.elements() {
            for y in b2.elements() {
                let a = it.next().expect("one coefficient per grid point").2;
                if a != 0.0 {
                    acc += &x.matrix().kron(y.matrix()).scale_re(a);
                }
            }
        }
        acc
    }

    /// `Tr[W R]`.
    pub fn expectation(&self, r: &Pdm) -> f64 {
        self.mat.expectation(r.matrix())
    }
}

pub fn synthesize_witness(r: &Pdm) -> Result<Witness> {
    synthesize_witness_with(r, &WitnessPolicy::NegativeEigenspace)
}

pub fn synthesize_witness_with(r: &Pdm, policy: &WitnessPolicy) -> Result<Witness> {
    let e = r.eig();
    let min = e.min();
    match policy {
        WitnessPolicy::NegativeEigenspace | WitnessPolicy::MostNegative if min >= -tol::NEGATIVITY => Err(Error::NotSpatiallyIncompatible),
        WitnessPolicy::NegativeEigenspace => Witness::new(e.spectral_projector(|l| l < -tol::NEGATIVITY), r.dims()),
        WitnessPolicy::MostNegative => Witness::new(HermitianMatrix::projector(&e.eigenvector(0)), r.dims()),
        WitnessPolicy::Custom(w) => {
            let wit = Witness::new(w.clone(), r.dims())?;
            let value = wit.expectation(r);
            if value >= -tol::NEGATIVITY {
                return Err(Error::NotAWitness(format!("Tr[W R] = {value:e} is not negative")));
            }
            Ok(wit)
        }
    }
}

/// `Σ a_ab t(a, b)` over the coefficients of `w`.
pub fn evaluate_witness(w: &Witness, t: &CorrelatorTable) -> Result<f64> {
    evaluate_witness_sampled(w, t).map(|(v, _)| v)
}

/// Value and standard error. Sampled entries with outcomes `±λ_a λ_b`
/// contribute variance `((λ_a λ_b)² - t²) / shots`; exact entries contribute none.
pub fn evaluate_witness_sampled(w: &Witness, t: &CorrelatorTable) -> Result<(f64, f64)> {
    if t.bases() != w.bases {
        return Err(Error::DimensionMismatch(format!(
            "table over ({}, {}) but witness over ({}, {})",
            t.bases().0,
            t.bases().1,
            w.bases.0,
            w.bases.1
        )));
    }
    let (b1, b2) = (Basis::new(w.bases.0), Basis::new(w.bases.1));
    let lambda1: Vec<f64> = b1.elements().iter().map(|o| o.lambda()).collect();
    let lambda2: Vec<f64> = b2.elements().iter().map(|o| o.lambda()).collect();
    let mut missing = Vec::new();
    let (mut value, mut var) = (0.0, 0.0);
    for (k, (a, b, coeff)) in w.coeffs.iter().enumerate() {
        if coeff.abs() <= COEFF_FLOOR {
            continue;
        }
        let Some(entry) = t.entry(a, b) else {
            missing.push((a.clone(), b.clone()));
            continue;
        };
        value += coeff * entry.value;
        if let Some(shots) = entry.shots {
            let scale = lambda1[k / b2.len()] * lambda2[k % b2.len()];
            let single = (scale * scale - entry.value * entry.value).max(0.0);
            var += coeff * coeff * single / shots as f64;
        }
    }
    if !missing.is_empty() {
        return Err(Error::IncompleteTable { missing });
    }
    Ok((value, libm::sqrt(var)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, C64};
    use crate::pdm::{exact_correlators, pdm_closed_form, CorrelatorEntry};
    use crate::qobjects::{DensityMatrix, KrausChannel};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    const Q: BasisKind = BasisKind::Pauli { n_qubits: 1 };

    fn identity_example() -> Pdm {
        pdm_closed_form(&DensityMatrix::basis(2, 0), &KrausChannel::identity(2)).unwrap()
    }

    #[test]
    fn singlet_witness() {
        let w = synthesize_witness(&identity_example()).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let singlet: [C64; 4] = [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)];
        assert!(w.matrix().max_abs_diff(&HermitianMatrix::projector(&singlet)) < 1e-12);
        for (a, b, v) in w.coefficients() {
            let expected = match (a.as_str(), b.as_str()) {
                ("I", "I") => 0.25,
                ("X", "X") | ("Y", "Y") | ("Z", "Z") => -0.25,
                _ => 0.0,
            };
            assert!((v - expected).abs() < 1e-12, "({a},{b}) = {v}");
        }
        assert!(w.reconstruct().max_abs_diff(w.matrix()) < 1e-12);
    }

    #[test]
    fn witness_on_exact_table() {
        let r = identity_example();
        let w = synthesize_witness(&r).unwrap();
        let t = exact_correlators(&r, Q, Q).unwrap();
        let v = evaluate_witness(&w, &t).unwrap();
        assert!((v + 0.5).abs() < 1e-12);
        assert!((w.expectation(&r) - v).abs() < 1e-12);
    }

    #[test]
    fn witness_on_density_matrices_is_nonnegative() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let w = synthesize_witness(&identity_example()).unwrap();
        for _ in 0..200 {
            let rho = Pdm::from_density(&random::random_state(4, &mut rng), (2, 2)).unwrap();
            let t = exact_correlators(&rho, Q, Q).unwrap();
            assert!(evaluate_witness(&w, &t).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn policies() {
        let r = pdm_closed_form(&DensityMatrix::plus(), &KrausChannel::dephasing(2)).unwrap();
        let full = synthesize_witness(&r).unwrap();
        let single = synthesize_witness_with(&r, &WitnessPolicy::MostNegative).unwrap();
        assert!((full.matrix().trace_re() - 2.0).abs() < 1e-12);
        assert!((single.matrix().trace_re() - 1.0).abs() < 1e-12);
        let lam = (1.0 - core::f64::consts::SQRT_2) / 4.0;
        assert!((full.expectation(&r) - 2.0 * lam).abs() < 1e-12);
        assert!((single.expectation(&r) - lam).abs() < 1e-12);

        let custom = synthesize_witness_with(&r, &WitnessPolicy::Custom(full.matrix().clone())).unwrap();
        assert!((custom.expectation(&r) - 2.0 * lam).abs() < 1e-12);
        assert!(matches!(
            synthesize_witness_with(&r, &WitnessPolicy::Custom(HermitianMatrix::identity(4))),
            Err(Error::NotAWitness(_))
        ));
        assert!(matches!(
            synthesize_witness_with(&r, &WitnessPolicy::Custom(HermitianMatrix::diag(&[1.0, -1.0, 0.0, 0.0]))),
            Err(Error::NotAWitness(_))
        ));
    }

    #[test]
    fn density_matrix_has_no_witness() {
        let r = Pdm::from_density(&DensityMatrix::maximally_mixed(4), (2, 2)).unwrap();
        assert!(matches!(synthesize_witness(&r), Err(Error::NotSpatiallyIncompatible)));
    }

    #[test]
    fn missing_pairs_are_reported() {
        let w = synthesize_witness(&identity_example()).unwrap();
        let mut t = CorrelatorTable::new(Q, Q);
        t.insert("I", "I", 1.0);
        t.insert("X", "X", 1.0);
        match evaluate_witness(&w, &t) {
            Err(Error::IncompleteTable { missing }) => assert_eq!(missing.len(), 2),
            other => panic!("{other:?}"),
        }
        t.insert("Y", "Y", 1.0);
        t.insert("Z", "Z", 1.0);
        assert!((evaluate_witness(&w, &t).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampled_error_uses_binomial_variance() {
        let w = synthesize_witness(&identity_example()).unwrap();
        let mut t = CorrelatorTable::new(Q, Q);
        for (a, b, _) in t.grid() {
            t.insert_entry(&a, &b, CorrelatorEntry { value: 0.0, shots: Some(100), stderr: None });
        }
        t.insert_entry("I", "I", CorrelatorEntry { value: 1.0, shots: Some(100), stderr: None });
        let (v, se) = evaluate_witness_sampled(&w, &t).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        // three entries at t = 0: 3 · (1/16) · 1/100
        assert!((se - libm::sqrt(3.0 / 1600.0)).abs() < 1e-12);
    }

    #[test]
    fn qutrit_witness_coefficients_reconstruct() {
        let r = pdm_closed_form(&DensityMatrix::basis(3, 0), &KrausChannel::identity(3)).unwrap();
        let w = synthesize_witness(&r).unwrap();
        assert!(w.reconstruct().max_abs_diff(w.matrix()) < 1e-12);
        let t = exact_correlators(&r, BasisKind::for_dim(3), BasisKind::for_dim(3)).unwrap();
        assert!((evaluate_witness(&w, &t).unwrap() - w.expectation(&r)).abs() < 1e-12);
    }
}
