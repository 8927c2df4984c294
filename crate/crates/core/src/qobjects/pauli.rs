use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::{c, HermitianMatrix, Matrix, ONE, ZERO};
use crate::qobjects::basis::{LightTouchObservable, SpectrumKind};

pub fn x() -> Matrix {
    Matrix::from_vec(2, 2, alloc::vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn y() -> Matrix {
    Matrix::from_vec(2, 2, alloc::vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap()
}

pub fn z() -> Matrix {
    Matrix::diag_real(&[1.0, -1.0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn matrix(self) -> Matrix {
        match self {
            PauliLetter::I => Matrix::identity(2),
            PauliLetter::X => x(),
            PauliLetter::Y => y(),
            PauliLetter::Z => z(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis; the first letter acts on the
/// most significant qubit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        Ok(Self { letters })
    }

    pub fn parse(label: &str) -> Result<Self> {
        let letters = label
            .chars()
            .map(|ch| PauliLetter::from_char(ch).ok_or_else(|| Error::InvalidArgument(alloc::format!("bad Pauli letter {ch:?} in {label:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn matrix(&self) -> HermitianMatrix {
        let m = self.letters.iter().skip(1).fold(self.letters[0].matrix(), |acc, l| acc.kron(&l.matrix()));
        HermitianMatrix::new(m).expect("Pauli strings are Hermitian")
    }

    /// Paulis are light-touch with λ = 1: spectrum {1} for the identity, {±1} otherwise.
    pub fn to_observable(&self) -> LightTouchObservable {
        let kind = if self.is_identity() { SpectrumKind::Single } else { SpectrumKind::PlusMinus };
        LightTouchObservable::from_parts(self.label(), self.matrix(), 1.0, kind)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// All `4^n` Pauli strings in lexicographic order with `I < X < Y < Z` per site.
pub fn pauli_basis(n: usize) -> Vec<PauliString> {
    assert!(n >= 1, "pauli_basis needs at least one qubit");
    let total = 1usize << (2 * n);
    (0..total)
        .map(|mut k| {
            let mut letters = alloc::vec![PauliLetter::I; n];
            for slot in letters.iter_mut().rev() {
                *slot = PauliLetter::ALL[k % 4];
                k /= 4;
            }
            PauliString { letters }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_order() {
        let labels: Vec<String> = pauli_basis(1).iter().map(PauliString::label).collect();
        assert_eq!(labels, ["I", "X", "Y", "Z"]);
    }

    #[test]
    fn two_qubit_basis_bounds() {
        let b = pauli_basis(2);
        assert_eq!(b.len(), 16);
        assert_eq!(b[0].label(), "II");
        assert_eq!(b[15].label(), "ZZ");
        assert_eq!(b[1].label(), "IX");
    }

    #[test]
    fn trace_orthogonality() {
        // direct matrix oracle: Tr[XZ·XZ] = 4, Tr[XZ·YI] = 0
        let xz = PauliString::parse("XZ").unwrap().matrix();
        let yi = PauliString::parse("YI").unwrap().matrix();
        assert!((xz.expectation(&xz) - 4.0).abs() < 1e-15);
        assert!(xz.expectation(&yi).abs() < 1e-15);
        let basis = pauli_basis(2);
        for (a, pa) in basis.iter().enumerate() {
            for (b, pb) in basis.iter().enumerate() {
                let t = pa.matrix().as_matrix().trace_product(pb.matrix().as_matrix());
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((t.re - expected).abs() < 1e-14 && t.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pauli_strings_are_unitary_with_pm_one_spectrum() {
        for p in pauli_basis(2) {
            let m = p.matrix();
            assert!((m.as_matrix() * m.as_matrix()).max_abs_diff(&Matrix::identity(4)) < 1e-15);
            let e = m.eig();
            assert!(e.eigenvalues().iter().all(|l| (l.abs() - 1.0).abs() < 1e-12));
            if !p.is_identity() {
                assert!(m.trace().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PauliString::parse("XQ").is_err());
        assert!(PauliString::parse("").is_err());
    }
}
