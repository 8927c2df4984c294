//! Seeded random quantum objects for sweeps and property checks.
//!
//! Every function takes the generator explicitly; nothing here touches
//! global state.

use alloc::vec::Vec;

use rand::Rng;

use crate::matrix::{c, HermitianMatrix, Matrix, C64, ZERO};
use crate::qobjects::{DensityMatrix, KrausChannel};

/// Standard normal sample by the Box-Muller transform.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

/// Complex normal with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    c(s * standard_normal(rng), s * standard_normal(rng))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed isometry (`V†V = I`) from the QR decomposition of a
/// complex Gaussian matrix with the phases of `R`'s diagonal fixed positive.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut q = ginibre(rows, cols, rng);
    for j in 0..cols {
        // two passes of modified Gram-Schmidt keep orthogonality near machine precision
        for _ in 0..2 {
            for k in 0..j {
                let mut overlap = ZERO;
                for i in 0..rows {
                    overlap += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..rows {
                    let qik = q[(i, k)];
                    q[(i, j)] -= qik * overlap;
                }
            }
        }
        let norm = libm::sqrt((0..rows).map(|i| q[(i, j)].norm_sqr()).sum::<f64>());
        for i in 0..rows {
            q[(i, j)] /= norm;
        }
    }
    q
}

pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    haar_isometry(d, d, rng)
}

/// Hilbert-Schmidt random mixed state `G G† / Tr[G G†]`.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let m = &g * &g.adjoint();
    let t = m.trace().re;
    DensityMatrix::from_hermitian_unchecked(HermitianMatrix::hermitian_part(&m.scale_re(1.0 / t)))
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
    DensityMatrix::pure(&v).expect("Gaussian vector is nonzero almost surely")
}

/// Uniform point of the probability simplex (flat Dirichlet).
pub fn random_probabilities<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..d).map(|_| -libm::log(1.0 - rng.gen::<f64>())).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

pub fn random_incoherent_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let p = random_probabilities(d, rng);
    DensityMatrix::from_hermitian_unchecked(HermitianMatrix::diag(&p))
}

/// Stinespring construction: a Haar isometry `V: H_in → H_out ⊗ H_env`
/// gives Kraus operators `K_e = (I ⊗ ⟨e|) V`.
pub fn random_channel<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, env_dim: usize, rng: &mut R) -> KrausChannel {
    let v = haar_isometry(out_dim * env_dim, in_dim, rng);
    let ops = (0..env_dim)
        .map(|e| Matrix::from_fn(out_dim, in_dim, |k, i| v[(k * env_dim + e, i)]))
        .collect();
    KrausChannel::new_unchecked(in_dim, out_dim, ops)
}

/// `random_channel` with the default environment dimension of 4.
pub fn random_channel_default<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> KrausChannel {
    random_channel(in_dim, out_dim, 4, rng)
}

pub fn random_unitary_channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> KrausChannel {
    KrausChannel::new_unchecked(d, d, alloc::vec![haar_unitary(d, rng)])
}

/// GUE-like Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&ginibre(d, d, rng))
}

/// `U diag(±1) U†` with Haar `U` and both signs present when `d >= 2`.
pub fn random_pm1_observable<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianMatrix {
    let mut signs: Vec<f64> = (0..d).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
    if d >= 2 && signs.iter().all(|&s| s == signs[0]) {
        let k = rng.gen_range(0..d);
        signs[k] = -signs[k];
    }
    HermitianMatrix::diag(&signs).conjugate_by(&haar_unitary(d, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn isometries_are_isometric() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for (r, c) in [(2, 2), (8, 2), (12, 3), (4, 4)] {
            let v = haar_isometry(r, c, &mut rng);
            assert!((&v.adjoint() * &v).max_abs_diff(&Matrix::identity(c)) < 1e-13);
        }
    }

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for d in 2..=4 {
            let ch = random_channel(d, d, 4, &mut rng);
            assert!(ch.trace_preservation_deviation() < 1e-12);
            let rho = random_state(d, &mut rng);
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            let p = random_probabilities(d, &mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12 && p.iter().all(|&x| x >= 0.0));
            let q = random_pm1_observable(d, &mut rng);
            assert!((q.as_matrix() * q.as_matrix()).max_abs_diff(&Matrix::identity(d)) < 1e-12);
            let e = q.eig();
            assert!(e.min() < 0.0 && e.max() > 0.0);
        }
    }

    #[test]
    fn normal_moments() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }
}
