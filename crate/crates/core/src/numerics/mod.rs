//! Dense complex-matrix kernels, eigensolvers, the truncated displacement
//! operator and deterministic random streams.

mod chebyshev;
mod eigen;
pub mod fit;
mod matrix;
mod random;

pub use chebyshev::{bessel_j_sequence, ExpPropagator};
pub use eigen::{
    hermitian_eigensystem, hermitian_eigenvalues, symmetric_tridiagonal_eigensystem,
    HermitianEigen, HERMITIAN_TOLERANCE,
};
pub use matrix::ComplexMatrix;
pub use random::{gaussian_draw, RandomStream};

use crate::error::Error;
use crate::Result;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Off-diagonal of the truncated position-like operator `a + a†`: entry `k` is `√(k+1)`.
pub fn ladder_offdiagonal(n_max: usize) -> Vec<f64> {
    (1..n_max).map(|k| libm::sqrt(k as f64)).collect()
}

/// Gauge angle `φ` with `D(η) = S exp(i|η|(a+a†)) S†`, `S = diag(e^{iφ n})`.
fn displacement_gauge(eta: Complex64) -> f64 {
    if eta.norm() == 0.0 {
        0.0
    } else {
        libm::atan2(-eta.re, eta.im)
    }
}

/// Truncated displacement `exp(η a† − η* a)` on `n_max` Fock levels.
///
/// The anti-Hermitian generator is exponentiated through the eigensystem of the
/// real tridiagonal matrix `a + a†`, so the result is unitary on the truncated
/// space to rounding.
pub fn displacement_matrix(eta: Complex64, n_max: usize) -> Result<ComplexMatrix> {
    if n_max < 2 {
        return Err(Error::param("n_max", "must be at least 2"));
    }
    let r = eta.norm();
    if r == 0.0 {
        return Ok(ComplexMatrix::identity(n_max));
    }
    let diag = alloc::vec![0.0; n_max];
    let off = ladder_offdiagonal(n_max);
    let (lambda, v) = symmetric_tridiagonal_eigensystem(&diag, &off)?;
    let phases: Vec<Complex64> = lambda.iter().map(|&l| Complex64::cis(r * l)).collect();
    let scaled = ComplexMatrix::from_fn(n_max, |i, k| phases[k] * v[i * n_max + k]);
    let vt = ComplexMatrix::from_fn(n_max, |k, j| Complex64::new(v[j * n_max + k], 0.0));
    let mut d = scaled.matmul(&vt);
    let phi = displacement_gauge(eta);
    if phi != 0.0 {
        let s: Vec<Complex64> = (0..n_max).map(|n| Complex64::cis(phi * n as f64)).collect();
        for i in 0..n_max {
            for j in 0..n_max {
                d[(i, j)] *= s[i] * s[j].conj();
            }
        }
    }
    Ok(d)
}

/// Chebyshev propagator for `exp(η a† − η* a)` acting on state vectors.
///
/// Represents the same truncated operator as [`displacement_matrix`] without
/// forming it, which keeps large truncations affordable.
pub fn displacement_propagator(eta: Complex64, n_max: usize) -> Result<ExpPropagator> {
    if n_max < 2 {
        return Err(Error::param("n_max", "must be at least 2"));
    }
    ExpPropagator::new(
        eta.norm(),
        alloc::vec![0.0; n_max],
        ladder_offdiagonal(n_max),
        displacement_gauge(eta),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = RandomStream::new(seed, 0);
        let mut a = ComplexMatrix::from_fn(n, |_, _| Complex64::new(s.gaussian(), s.gaussian()));
        a.hermitize();
        a
    }

    #[test]
    fn identity_eigensystem() {
        let e = hermitian_eigensystem(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(e.reconstruct().distance_from_identity() < 1e-14);
    }

    #[test]
    fn diagonal_eigenvalues_ascending() {
        let d = [2.0, -1.0, 0.0].map(|x| Complex64::new(x, 0.0));
        let e = hermitian_eigensystem(&ComplexMatrix::from_diagonal(&d)).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 0.0, 2.0]);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let a = random_hermitian(8, 11);
        let e = hermitian_eigensystem(&a).unwrap();
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-9 * 8.0);
        let v = &e.eigenvectors;
        assert!(v.adjoint().matmul(v).distance_from_identity() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = ComplexMatrix::identity(3);
        a[(0, 1)] = Complex64::new(1e-6, 0.0);
        match hermitian_eigensystem(&a) {
            Err(Error::NotHermitian { asymmetry }) => assert!((asymmetry - 1e-6).abs() < 1e-18),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        assert_eq!(
            displacement_matrix(Complex64::new(0.0, 0.0), 8).unwrap(),
            ComplexMatrix::identity(8)
        );
    }

    #[test]
    fn displacement_unitary_and_inverse() {
        let eta = Complex64::new(0.7, -1.3);
        let d = displacement_matrix(eta, 64).unwrap();
        assert!(d.adjoint().matmul(&d).distance_from_identity() < 1e-10);
        let dm = displacement_matrix(-eta, 64).unwrap();
        assert!(d.matmul(&dm).distance_from_identity() < 1e-9);
    }

    #[test]
    fn displacement_vacuum_overlap() {
        for eta in [
            Complex64::new(0.0, 2.0),
            Complex64::new(1.2, 0.5),
            Complex64::new(-0.3, 0.0),
        ] {
            let d = displacement_matrix(eta, 64).unwrap();
            let expected = libm::exp(-0.5 * eta.norm_sqr());
            assert!((d[(0, 0)] - expected).norm() < 1e-8, "{eta}: {}", d[(0, 0)]);
        }
    }

    #[test]
    fn displacement_matches_coherent_state_amplitudes() {
        // ⟨n|D(η)|0⟩ = e^{−|η|²/2} ηⁿ/√n!
        let eta = Complex64::new(0.4, 1.1);
        let d = displacement_matrix(eta, 96).unwrap();
        let mut amp = Complex64::new(libm::exp(-0.5 * eta.norm_sqr()), 0.0);
        for n in 0..20 {
            assert!((d[(n, 0)] - amp).norm() < 1e-10, "n={n}");
            amp = amp * eta / libm::sqrt((n + 1) as f64);
        }
    }

    #[test]
    fn chebyshev_propagator_matches_eigen_route() {
        for eta in [Complex64::new(0.0, 2.0), Complex64::new(0.8, -0.6)] {
            let n = 48;
            let d = displacement_matrix(eta, n).unwrap();
            let p = displacement_propagator(eta, n).unwrap();
            let mut s = RandomStream::new(3, 1);
            let mut v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(s.gaussian(), s.gaussian()))
                .collect();
            let expected = d.mul_vec(&v);
            p.apply(&mut v);
            let err = v
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-11, "{err}");
        }
    }

    #[test]
    fn bessel_sequence_known_values() {
        let j = bessel_j_sequence(1.0, 3);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((j[2] - 0.114_903_484_931_900_5).abs() < 1e-15);
        let big = bessel_j_sequence(300.0, 400);
        assert!(
            (big[0] - (-0.033_298_554_876_305_66)).abs() < 1e-13,
            "{}",
            big[0]
        );
        assert!(
            (big[350] / 1.517_888_430_669_362e-10 - 1.0).abs() < 1e-9,
            "{}",
            big[350]
        );
    }

    #[test]
    fn banded_conjugation_matches_dense() {
        let n = 300;
        let d = displacement_matrix(Complex64::new(0.0, 1.5), n).unwrap();
        let x = random_hermitian(n, 5);
        let dense = d.matmul(&x).matmul_adjoint(&d);
        let banded = d.conjugate_banded(d.bandwidth(1e-17), &x);
        assert!(banded.max_abs_diff(&dense) < 1e-12);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = RandomStream::new(42, 7);
            (0..16).map(|_| gaussian_draw(&mut s)).collect()
        };
        let b: Vec<f64> = {
            let mut s = RandomStream::new(42, 7);
            (0..16).map(|_| gaussian_draw(&mut s)).collect()
        };
        let c: Vec<f64> = {
            let mut s = RandomStream::new(42, 8);
            (0..16).map(|_| gaussian_draw(&mut s)).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_moments() {
        let mut s = RandomStream::new(2024, 0);
        let n = 1_000_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let x = s.gaussian();
            sum += x;
            sq += x * x;
        }
        let mean = sum / n as f64;
        let var = sq / n as f64 - mean * mean;
        assert!(mean.abs() < 5e-3, "{mean}");
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }
}
