use alloc::vec::Vec;

use num_complex::Complex64;

use super::floquet::FloquetOperator;
use super::state::FockDensityMatrix;
use crate::numerics::ComplexMatrix;

/// Something that maps `ρ ↦ U ρ U†`.
pub trait Conjugator {
    /// Dimension of the operator.
    fn dim(&self) -> usize;
    /// `U ρ U†`.
    fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix;
}

impl Conjugator for ComplexMatrix {
    fn dim(&self) -> usize {
        ComplexMatrix::dim(self)
    }

    fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rho).matmul_adjoint(self)
    }
}

impl Conjugator for FloquetOperator {
    fn dim(&self) -> usize {
        FloquetOperator::dim(self)
    }

    fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.kick_conjugate(rho);
        let p = self.phases();
        let n = out.dim();
        for i in 0..n {
            let row = out.row_mut(i);
            for (j, x) in row.iter_mut().enumerate() {
                *x *= p[i] * p[j].conj();
            }
        }
        out
    }
}

/// Multiplies `ρ_{ij}` by `f(i − j)` and restores exact Hermiticity.
fn modulate(mut rho: ComplexMatrix, f: impl Fn(usize) -> Complex64) -> ComplexMatrix {
    let n = rho.dim();
    let table: Vec<Complex64> = (0..n).map(f).collect();
    for i in 0..n {
        let row = rho.row_mut(i);
        for (j, x) in row.iter_mut().enumerate() {
            if i > j {
                *x *= table[i - j];
            } else if j > i {
                *x *= table[j - i].conj();
            }
        }
    }
    rho.hermitize();
    rho
}

/// `U ρ U†`.
pub fn unitary_step(rho: &FockDensityMatrix, u: &impl Conjugator) -> FockDensityMatrix {
    let mut out = u.conjugate(rho.matrix());
    out.hermitize();
    FockDensityMatrix::from_matrix_unchecked(out)
}

/// One noisy period `e^{−iξn̂} U ρ U† e^{iξn̂}` for a fixed noise value `ξ`.
pub fn noisy_step(rho: &FockDensityMatrix, u: &impl Conjugator, xi: f64) -> FockDensityMatrix {
    let out = u.conjugate(rho.matrix());
    FockDensityMatrix::from_matrix_unchecked(modulate(out, |m| Complex64::cis(-xi * m as f64)))
}

/// One period averaged over Gaussian noise of width `σ`:
/// `ρ'_{n'n} = e^{−σ²(n'−n)²/2} (UρU†)_{n'n}`.
pub fn averaged_step(
    rho: &FockDensityMatrix,
    u: &impl Conjugator,
    sigma: f64,
) -> FockDensityMatrix {
    let out = u.conjugate(rho.matrix());
    let s2 = sigma * sigma;
    FockDensityMatrix::from_matrix_unchecked(modulate(out, |m| {
        let m = m as f64;
        Complex64::new(libm::exp(-0.5 * s2 * m * m), 0.0)
    }))
}

/// Applies the Gaussian dephasing mask `e^{−σ²(n'−n)²/2}` without evolution.
pub fn dephase(rho: &FockDensityMatrix, sigma: f64) -> FockDensityMatrix {
    let s2 = sigma * sigma;
    FockDensityMatrix::from_matrix_unchecked(modulate(rho.matrix().clone(), |m| {
        let m = m as f64;
        Complex64::new(libm::exp(-0.5 * s2 * m * m), 0.0)
    }))
}
