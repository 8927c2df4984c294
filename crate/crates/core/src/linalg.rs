//! Spectral kernel: Hermitian eigendecomposition, pseudo-inverse, simplex
//! projection and the matrix exponential used for Lindblad semigroups.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix, C64, ZERO};
use crate::tol;

/// Eigenvalues in ascending order with matching unit eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Matrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Columns are eigenvectors.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        self.with_spectrum(&fl)
    }

    /// `V · diag(values) · V†` with the stored eigenvectors.
    pub fn with_spectrum(&self, fl: &[f64]) -> HermitianMatrix {
        let n = self.values.len();
        assert_eq!(fl.len(), n, "spectrum length mismatch");
        let v = &self.vectors;
        let m = Matrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for (k, &w) in fl.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        });
        HermitianMatrix::hermitian_part(&m)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_spectrum(|l| l)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> HermitianMatrix {
        self.map_spectrum(|l| if keep(l) { 1.0 } else { 0.0 })
    }
}

/// Eigendecomposition of a Hermitian matrix given as a plain [`Matrix`].
pub fn eig_hermitian(m: &Matrix) -> Result<EigenDecomposition> {
    let deviation = m.hermitian_deviation();
    if deviation > tol::HERMITIAN {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(eig_hermitian_unchecked(m))
}

/// Cyclic complex Jacobi. Each rotation first rephases `a_pq` to be real and
/// then applies the classical real rotation, so the accumulated transform
/// stays unitary.
pub(crate) fn eig_hermitian_unchecked(m: &Matrix) -> EigenDecomposition {
    let n = m.rows();
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    sort_eigenpairs(&mut pairs);

    let values = pairs.iter().map(|(l, _)| *l).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    EigenDecomposition { values, vectors }
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let cs = 1.0 / libm::sqrt(1.0 + t * t);
    let sn = t * cs;
    let ph = phase.conj();
    let u_pp = C64::new(cs, 0.0);
    let u_pq = C64::new(sn, 0.0);
    let u_qp = ph * (-sn);
    let u_qq = ph * cs;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Make the first entry with modulus above 1e-12 real and positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let rot = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= rot;
        }
    }
}

const TIE: f64 = 1e-10;

fn sort_eigenpairs(pairs: &mut [(f64, Vec<C64>)]) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // within a cluster of tied eigenvalues, order eigenvectors lexicographically
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= TIE {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        }
        start = end;
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        for (u, w) in [(x.re, y.re), (x.im, y.im)] {
            if (u - w).abs() > 1e-12 {
                return u.total_cmp(&w);
            }
        }
    }
    Ordering::Equal
}

/// Moore-Penrose pseudo-inverse of a Hermitian matrix. Eigenvalues with
/// `|λ| <= rank_tol · max|λ|` are dropped.
pub fn pseudo_inverse(m: &HermitianMatrix, rank_tol: f64) -> HermitianMatrix {
    let e = m.eig();
    let scale = e.eigenvalues().iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    if scale == 0.0 {
        return HermitianMatrix::hermitian_part(&Matrix::zeros(m.dim(), m.dim()));
    }
    let cut = rank_tol * scale;
    e.map_spectrum(|l| if l.abs() > cut { 1.0 / l } else { 0.0 })
}

/// Euclidean projection onto the probability simplex `{q >= 0, Σq = 1}`
/// by sorting and thresholding.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    let mut w: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // absorb rounding so the output sums to one
    let s: f64 = w.iter().sum();
    if s > 0.0 && (s - 1.0).abs() > 0.0 {
        let support: usize = w.iter().filter(|&&x| x > 0.0).count();
        let shift = (s - 1.0) / support as f64;
        for x in w.iter_mut().filter(|x| **x > 0.0) {
            *x = (*x - shift).max(0.0);
        }
    }
    w
}

/// Schatten p-norm of a Hermitian matrix from its spectrum.
pub fn schatten_norm(m: &HermitianMatrix, p: f64) -> f64 {
    let e = m.eig();
    vector_p_norm(e.eigenvalues(), p)
}

pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    m.eig().eigenvalues().iter().map(|l| l.abs()).sum()
}

pub(crate) fn vector_p_norm(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|v| libm::pow(v.abs() / m, p)).sum();
    m * libm::pow(s, 1.0 / p)
}

fn one_norm(m: &Matrix) -> f64 {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(t · G)` for a square generator by scaling and squaring with a
/// truncated Taylor series.
pub fn superop_exp(generator: &Matrix, t: f64) -> Matrix {
    assert!(generator.is_square(), "generator must be square");
    let n = generator.rows();
    let a = generator.scale_re(t);
    let norm = one_norm(&a);
    let mut squarings = 0u32;
    let mut s = 1.0;
    while norm / s > 0.25 {
        s *= 2.0;
        squarings += 1;
    }
    let b = a.scale_re(1.0 / s);
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=40 {
        term = (&term * &b).scale_re(1.0 / k as f64);
        result += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::qobjects::pauli::{x, z};

    fn assert_vec_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn eig_known_spectra() {
        let e = eig_hermitian(&Matrix::identity(2)).unwrap();
        assert_vec_close(e.eigenvalues(), &[1.0, 1.0], 1e-15);
        let e = eig_hermitian(&z()).unwrap();
        assert_vec_close(e.eigenvalues(), &[-1.0, 1.0], 1e-15);
        assert!(e.eigenvector(0)[1].re > 0.0 && e.eigenvector(0)[0].norm() < 1e-15);
    }

    #[test]
    fn eig_identity_channel_pdm() {
        // R(|0><0|, identity) as displayed in the SM
        let r = Matrix::from_real(4, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let e = eig_hermitian(&r).unwrap();
        assert_vec_close(e.eigenvalues(), &[-0.5, 0.0, 0.5, 1.0], 1e-12);
        // the -1/2 eigenvector is the singlet (|01> - |10>)/sqrt 2 after phase normalization
        let v = e.eigenvector(0);
        let s = 1.0 / libm::sqrt(2.0);
        assert!((v[1] - c(s, 0.0)).norm() < 1e-12 && (v[2] - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn eig_tie_break_is_deterministic() {
        let e1 = eig_hermitian(&Matrix::identity(3)).unwrap();
        let e2 = eig_hermitian(&Matrix::identity(3)).unwrap();
        assert_eq!(e1.eigenvectors(), e2.eigenvectors());
        // lexicographic order after phase normalization: e3, e2, e1
        assert!((e1.eigenvector(0)[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e1.eigenvector(2)[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pseudo_inverse_cases() {
        let d = HermitianMatrix::diag(&[2.0, 0.0]);
        assert!(pseudo_inverse(&d, tol::RANK).max_abs_diff(&Matrix::diag_real(&[0.5, 0.0])) < 1e-15);
        let id = HermitianMatrix::identity(3);
        assert!(pseudo_inverse(&id, tol::RANK).max_abs_diff(&Matrix::identity(3)) < 1e-14);
        let s = 1.0 / libm::sqrt(2.0);
        let plus = HermitianMatrix::projector(&[c(s, 0.0), c(s, 0.0)]);
        let pinv = pseudo_inverse(&plus, tol::RANK);
        assert!(pinv.max_abs_diff(&plus) < 1e-14);
        let mmm = &(plus.as_matrix() * pinv.as_matrix()) * plus.as_matrix();
        assert!(mmm.max_abs_diff(&plus) < 1e-9);
        let zero = HermitianMatrix::diag(&[0.0, 0.0]);
        assert_eq!(pseudo_inverse(&zero, tol::RANK).max_abs(), 0.0);
    }

    /// Independent oracle: bisection on the threshold θ with Σ max(v-θ,0) = 1.
    fn simplex_oracle(v: &[f64]) -> Vec<f64> {
        let (mut lo, mut hi) = (v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0, v.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s: f64 = v.iter().map(|x| (x - mid).max(0.0)).sum();
            if s > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        v.iter().map(|x| (x - 0.5 * (lo + hi)).max(0.0)).collect()
    }

    #[test]
    fn simplex_projection_examples() {
        assert_vec_close(&project_simplex(&[0.3, 0.7]), &[0.3, 0.7], 1e-15);
        assert_vec_close(&project_simplex(&[2.0, 0.0]), &[1.0, 0.0], 1e-15);
        let v = [1.0, 0.5, 0.0, -0.5];
        let oracle = simplex_oracle(&v);
        assert_vec_close(&oracle, &[0.75, 0.25, 0.0, 0.0], 1e-12);
        assert_vec_close(&project_simplex(&v), &oracle, 1e-12);
    }

    #[test]
    fn superop_exp_zero_is_identity() {
        let g = Matrix::from_real(2, 2, &[-1.0, 2.0, 0.5, 3.0]).unwrap();
        assert!(superop_exp(&g, 0.0).max_abs_diff(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn superop_exp_of_rotation_generator() {
        // exp(-iθX) = cosθ I - i sinθ X
        let theta = 0.7;
        let g = x().scale(c(0.0, -1.0));
        let u = superop_exp(&g, theta);
        let expected = &Matrix::identity(2).scale_re(libm::cos(theta)) + &x().scale(c(0.0, -libm::sin(theta)));
        assert!(u.max_abs_diff(&expected) < 1e-14);
    }
}
