use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix, IMAG, ONE, ZERO};
use crate::qobjects::state::DensityMatrix;
use crate::tol;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    ops: Vec<Matrix>,
}

impl KrausChannel {
    /// Validates shapes and `Σ K†K = I` within [`tol::TRACE_PRESERVING`].
    pub fn new(ops: Vec<Matrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("channel needs at least one Kraus operator".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::DimensionMismatch("Kraus operators must be non-empty".into()));
        }
        if let Some(k) = ops.iter().position(|k| k.rows() != out_dim || k.cols() != in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {k} is {}x{}, expected {out_dim}x{in_dim}",
                ops[k].rows(),
                ops[k].cols()
            )));
        }
        let ch = Self { in_dim, out_dim, ops };
        let deviation = ch.trace_preservation_deviation();
        if deviation > tol::TRACE_PRESERVING {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    pub(crate) fn new_unchecked(in_dim: usize, out_dim: usize, ops: Vec<Matrix>) -> Self {
        Self { in_dim, out_dim, ops }
    }

    pub fn identity(d: usize) -> Self {
        Self::new_unchecked(d, d, alloc::vec![Matrix::identity(d)])
    }

    /// Δ: removes every off-diagonal entry in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        Self::new_unchecked(d, d, (0..d).map(|k| Matrix::unit(d, d, k, k)).collect())
    }

    pub fn unitary(u: Matrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch(format!("unitary must be square, got {}x{}", u.rows(), u.cols())));
        }
        Self::new(alloc::vec![u])
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("amplitude damping gamma {gamma} outside [0, 1]")));
        }
        let k0 = Matrix::diag_real(&[1.0, libm::sqrt(1.0 - gamma)]);
        let k1 = Matrix::unit(2, 2, 0, 1).scale_re(libm::sqrt(gamma));
        Ok(Self::new_unchecked(2, 2, alloc::vec![k0, k1]))
    }

    /// `ρ ↦ (1 - p) ρ + p Tr[ρ] I/d`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("depolarizing p {p} outside [0, 1]")));
        }
        let mut ops = alloc::vec![Matrix::identity(d).scale_re(libm::sqrt(1.0 - p))];
        let w = libm::sqrt(p / d as f64);
        for i in 0..d {
            for j in 0..d {
                ops.push(Matrix::unit(d, d, i, j).scale_re(w));
            }
        }
        Ok(Self::new_unchecked(d, d, ops))
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus_ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn is_square(&self) -> bool {
        self.in_dim == self.out_dim
    }

    /// `max |Σ K†K - I|`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut acc = Matrix::zeros(self.in_dim, self.in_dim);
        for k in &self.ops {
            acc += &(&k.adjoint() * k);
        }
        acc.max_abs_diff(&Matrix::identity(self.in_dim))
    }

    /// Works on any `in_dim × in_dim` operator, not only states.
    pub fn apply(&self, m: &Matrix) -> Result<Matrix> {
        if m.rows() != self.in_dim || m.cols() != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {}x{}, operator is {}x{}",
                self.in_dim,
                self.in_dim,
                m.rows(),
                m.cols()
            )));
        }
        let mut out = Matrix::zeros(self.out_dim, self.out_dim);
        for k in &self.ops {
            out += &(&(k * m) * &k.adjoint());
        }
        Ok(out)
    }

    pub fn apply_hermitian(&self, m: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::hermitian_part(&self.apply(m)?))
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_hermitian_unchecked(self.apply_hermitian(rho.matrix())?))
    }

    /// Row-major superoperator `Σ K ⊗ K̄`, so that `vec(N(X)) = S · vec(X)`.
    pub fn superoperator(&self) -> Matrix {
        let mut s = Matrix::zeros(self.out_dim * self.out_dim, self.in_dim * self.in_dim);
        for k in &self.ops {
            s += &k.kron(&k.conj());
        }
        s
    }

    pub fn jamiolkowski(&self) -> JamiolkowskiMatrix {
        JamiolkowskiMatrix::from_channel(self)
    }

    /// Maximum entrywise difference of the two actions over all units `|i⟩⟨j|`.
    pub fn action_distance(&self, other: &KrausChannel) -> Result<f64> {
        if self.in_dim != other.in_dim || self.out_dim != other.out_dim {
            return Err(Error::DimensionMismatch(format!(
                "channels {}->{} and {}->{}",
                self.in_dim, self.out_dim, other.in_dim, other.out_dim
            )));
        }
        Ok(self.superoperator().max_abs_diff(&other.superoperator()))
    }

    /// Action equality within [`tol::CHANNEL_IDENTITY`].
    pub fn equivalent(&self, other: &KrausChannel) -> bool {
        self.action_distance(other).map(|d| d <= tol::CHANNEL_IDENTITY).unwrap_or(false)
    }
}

/// `M_N = Σ_ij |i⟩⟨j| ⊗ N(|j⟩⟨i|)` on `H_in ⊗ H_out`.
#[derive(Clone, Debug)]
pub struct JamiolkowskiMatrix {
    mat: HermitianMatrix,
    in_dim: usize,
    out_dim: usize,
}

impl JamiolkowskiMatrix {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        let (din, dout) = (ch.in_dim, ch.out_dim);
        let mut m = Matrix::zeros(din * dout, din * dout);
        for i in 0..din {
            for j in 0..din {
                let image = ch.apply(&Matrix::unit(din, din, j, i)).expect("unit has input dimension");
                m.set_block(i, j, &image);
            }
        }
        Self { mat: HermitianMatrix::hermitian_part(&m), in_dim: din, out_dim: dout }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `N(|a⟩⟨b|)` is the `(b, a)` block, so `N(X) = Σ_ab X_ab · block(b, a)`.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.rows() != self.in_dim || x.cols() != self.in_dim {
            return Err(Error::DimensionMismatch(format!("operator is {}x{}, channel input is {}", x.rows(), x.cols(), self.in_dim)));
        }
        let dout = self.out_dim;
        let mut out = Matrix::zeros(dout, dout);
        for a in 0..self.in_dim {
            for b in 0..self.in_dim {
                let w = x[(a, b)];
                if w != ZERO {
                    out += &self.mat.block(b, a, dout, dout).scale(w);
                }
            }
        }
        Ok(out)
    }
}

pub fn jamiolkowski(ch: &KrausChannel) -> JamiolkowskiMatrix {
    JamiolkowskiMatrix::from_channel(ch)
}

pub fn apply_channel(ch: &KrausChannel, m: &Matrix) -> Result<Matrix> {
    ch.apply(m)
}

/// Δ(m): keeps the diagonal of a square matrix.
pub fn dephase(m: &Matrix) -> Matrix {
    assert!(m.is_square(), "dephase needs a square matrix");
    let n = m.rows();
    Matrix::from_fn(n, n, |i, j| if i == j { m[(i, i)] } else { ZERO })
}

/// Row-major superoperator of Δ in dimension `d`.
pub fn dephasing_superoperator(d: usize) -> Matrix {
    let mut s = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        s[(i * d + i, i * d + i)] = ONE;
    }
    s
}

/// `a ∘ b`: first `b`, then `a`.
pub fn compose(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    if b.out_dim != a.in_dim {
        return Err(Error::DimensionMismatch(format!("cannot compose {}->{} after {}->{}", a.in_dim, a.out_dim, b.in_dim, b.out_dim)));
    }
    let mut ops = Vec::with_capacity(a.ops.len() * b.ops.len());
    for ka in &a.ops {
        for kb in &b.ops {
            let k = ka * kb;
            if k.max_abs() > 0.0 {
                ops.push(k);
            }
        }
    }
    if ops.is_empty() {
        ops.push(Matrix::zeros(a.out_dim, b.in_dim));
    }
    Ok(KrausChannel::new_unchecked(b.in_dim, a.out_dim, ops))
}

/// Row-major Liouvillian superoperator of
/// `X ↦ -i[H, X] + Σ (L X L† - ½{L†L, X})`.
pub fn lindblad_generator(h: &HermitianMatrix, jumps: &[Matrix]) -> Result<Matrix> {
    let d = h.dim();
    if let Some(l) = jumps.iter().find(|l| l.rows() != d || l.cols() != d) {
        return Err(Error::DimensionMismatch(format!("jump operator is {}x{}, Hamiltonian is {d}x{d}", l.rows(), l.cols())));
    }
    let id = Matrix::identity(d);
    let mut g = (&h.as_matrix().kron(&id) - &id.kron(&h.transpose())).scale(-IMAG);
    for l in jumps {
        let ldl = &l.adjoint() * l;
        g += &l.kron(&l.conj());
        g += &ldl.kron(&id).scale_re(-0.5);
        g += &id.kron(&ldl.transpose()).scale_re(-0.5);
    }
    Ok(g)
}

/// Applies a row-major superoperator to a square operator.
pub fn apply_superoperator(s: &Matrix, m: &Matrix) -> Result<Matrix> {
    let v = m.vectorize();
    if s.cols() != v.len() {
        return Err(Error::DimensionMismatch(format!("superoperator has {} columns, operator has {} entries", s.cols(), v.len())));
    }
    let out = s.mat_vec(&v);
    let d = libm::round(libm::sqrt(out.len() as f64)) as usize;
    Matrix::from_vectorized(d, d, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::superop_exp;
    use crate::matrix::c;
    use crate::qobjects::pauli::{x, z};

    fn hadamard() -> Matrix {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Matrix::from_real(2, 2, &[h, h, h, -h]).unwrap()
    }

    fn swap() -> Matrix {
        let mut s = Matrix::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            s[(i, j)] = ONE;
        }
        s
    }

    fn sm_pair() -> KrausChannel {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let k0 = Matrix::from_real(2, 2, &[h, 0.0, h, 0.0]).unwrap();
        let k1 = Matrix::from_real(2, 2, &[0.0, h, 0.0, -h]).unwrap();
        KrausChannel::new(alloc::vec![k0, k1]).unwrap()
    }

    fn sample_op(d: usize) -> Matrix {
        Matrix::from_fn(d, d, |i, j| c(0.3 * i as f64 - 0.1 * j as f64 + 0.05, 0.2 * (i as f64 - 2.0 * j as f64)))
    }

    #[test]
    fn jamiolkowski_examples() {
        assert!(jamiolkowski(&KrausChannel::identity(2)).matrix().max_abs_diff(&swap()) < 1e-15);
        let dm = jamiolkowski(&KrausChannel::dephasing(2));
        assert!(dm.matrix().max_abs_diff(&Matrix::diag_real(&[1.0, 0.0, 0.0, 1.0])) < 1e-15);
        let full = KrausChannel::depolarizing(2, 1.0).unwrap();
        let jm = jamiolkowski(&full);
        assert!(jm.matrix().max_abs_diff(&Matrix::identity(4).scale_re(0.5)) < 1e-15);
        assert!((jm.matrix().trace_re() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jamiolkowski_round_trip() {
        let ch = compose(&KrausChannel::amplitude_damping(0.3).unwrap(), &sm_pair()).unwrap();
        let jm = ch.jamiolkowski();
        for i in 0..2 {
            for j in 0..2 {
                let unit = Matrix::unit(2, 2, i, j);
                assert!(jm.apply(&unit).unwrap().max_abs_diff(&ch.apply(&unit).unwrap()) < 1e-12);
            }
        }
        let m = sample_op(2);
        assert!(jm.apply(&m).unwrap().max_abs_diff(&ch.apply(&m).unwrap()) < 1e-12);
    }

    #[test]
    fn apply_examples() {
        let m = sample_op(3);
        assert!(KrausChannel::identity(3).apply(&m).unwrap().max_abs_diff(&m) < 1e-15);
        let off = Matrix::unit(2, 2, 0, 1);
        assert!(KrausChannel::dephasing(2).apply(&off).unwrap().max_abs() == 0.0);
        let out = sm_pair().apply(&Matrix::unit(2, 2, 0, 0)).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::plus()) < 1e-15);
        assert!(matches!(KrausChannel::identity(2).apply(&Matrix::identity(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn dephase_examples() {
        let d = Matrix::diag_real(&[0.2, 0.8]);
        assert_eq!(dephase(&d), d);
        assert!(dephase(&DensityMatrix::plus()).max_abs_diff(&Matrix::identity(2).scale_re(0.5)) < 1e-15);
        let m = sample_op(3);
        assert_eq!(dephase(&dephase(&m)), dephase(&m));
        let via_superop = apply_superoperator(&dephasing_superoperator(3), &m).unwrap();
        assert_eq!(via_superop, dephase(&m));
    }

    #[test]
    fn compose_examples() {
        let ch = sm_pair();
        assert!(compose(&ch, &KrausChannel::identity(2)).unwrap().equivalent(&ch));
        let dd = compose(&KrausChannel::dephasing(2), &KrausChannel::dephasing(2)).unwrap();
        assert!(dd.equivalent(&KrausChannel::dephasing(2)));
        let h = KrausChannel::unitary(hadamard()).unwrap();
        let delta = KrausChannel::dephasing(2);
        let zero = Matrix::unit(2, 2, 0, 0);
        let a = compose(&delta, &h).unwrap().apply(&zero).unwrap();
        let b = compose(&h, &delta).unwrap().apply(&zero).unwrap();
        assert!(a.max_abs_diff(&Matrix::identity(2).scale_re(0.5)) < 1e-15);
        assert!(b.max_abs_diff(&DensityMatrix::plus()) < 1e-15);
        assert!(matches!(compose(&KrausChannel::identity(3), &delta), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn superoperator_matches_action() {
        let ch = compose(&KrausChannel::depolarizing(3, 0.4).unwrap(), &KrausChannel::unitary(Matrix::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { ONE } else { ZERO })).unwrap()).unwrap();
        let m = sample_op(3);
        let via = apply_superoperator(&ch.superoperator(), &m).unwrap();
        assert!(via.max_abs_diff(&ch.apply(&m).unwrap()) < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(matches!(KrausChannel::new(alloc::vec![z().scale_re(0.5)]), Err(Error::NotTracePreserving { .. })));
        assert!(KrausChannel::new(alloc::vec![]).is_err());
        assert!(matches!(KrausChannel::new(alloc::vec![Matrix::identity(2), Matrix::zeros(3, 2)]), Err(Error::DimensionMismatch(_))));
        assert!(KrausChannel::unitary(x()).is_ok());
        assert!(KrausChannel::amplitude_damping(1.2).is_err());
        assert!(KrausChannel::depolarizing(2, 0.3).unwrap().trace_preservation_deviation() < 1e-15);
    }

    #[test]
    fn lindblad_dephasing_generator() {
        // L = sqrt(g) Z gives coherences decaying as exp(-2 g t)
        let g = 0.7;
        let gen = lindblad_generator(&HermitianMatrix::diag(&[0.0, 0.0]), &[z().scale_re(libm::sqrt(g))]).unwrap();
        let t = 1.3;
        let out = apply_superoperator(&superop_exp(&gen, t), &DensityMatrix::plus()).unwrap();
        assert!((out[(0, 1)].re - 0.5 * libm::exp(-2.0 * g * t)).abs() < 1e-12);
        assert!((out[(0, 0)].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lindblad_hamiltonian_matches_unitary() {
        // H = X: exp(-iXt) ρ exp(iXt)
        let t = 0.4;
        let gen = lindblad_generator(&HermitianMatrix::new(x()).unwrap(), &[]).unwrap();
        let u = &Matrix::identity(2).scale_re(libm::cos(t)) - &x().scale(c(0.0, libm::sin(t)));
        let rho = Matrix::unit(2, 2, 0, 0);
        let expect = &(&u * &rho) * &u.adjoint();
        let got = apply_superoperator(&superop_exp(&gen, t), &rho).unwrap();
        assert!(got.max_abs_diff(&expect) < 1e-12);
    }
}
