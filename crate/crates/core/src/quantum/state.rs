use alloc::vec::Vec;

use num_complex::Complex64;

use super::spec::FloquetSpec;
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Accepted Hermiticity defect of a density matrix.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Accepted deviation of the trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Accepted negative eigenvalue of a density matrix.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Largest renormalization accepted when truncating an initial state.
pub const RENORMALIZATION_LIMIT: f64 = 1e-10;
/// Largest occupation allowed in the top levels of the truncated basis.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

/// Density matrix in the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    rho: ComplexMatrix,
}

impl FockDensityMatrix {
    /// Wraps `rho` after checking finiteness, Hermiticity and unit trace.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::param("rho", "entries must be finite"));
        }
        let asymmetry = rho.hermiticity_defect();
        if asymmetry > HERMITICITY_TOLERANCE {
            return Err(Error::NotHermitian { asymmetry });
        }
        if (rho.trace().re - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::param("rho", "trace must equal one"));
        }
        Ok(Self { rho })
    }

    pub(crate) fn from_matrix_unchecked(rho: ComplexMatrix) -> Self {
        Self { rho }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::param("psi", "must be normalized"));
        }
        Self::new(ComplexMatrix::from_fn(psi.len(), |i, j| {
            psi[i] * psi[j].conj()
        }))
    }

    /// Fock state `|n⟩⟨n|`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::param("n", "must be below the truncation"));
        }
        let mut rho = ComplexMatrix::zeros(dim);
        rho[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self { rho })
    }

    /// Diagonal state with the given occupations.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = weights.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        Self::new(ComplexMatrix::from_diagonal(&diag))
    }

    /// Truncation dimension.
    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Consumes the state.
    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Element `⟨i|ρ|j⟩`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// Most negative eigenvalue (or the smallest one when all are positive).
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let values = hermitian_eigenvalues(&self.rho, HERMITICITY_TOLERANCE)?;
        Ok(values.first().copied().unwrap_or(0.0))
    }

    /// Errors when an eigenvalue falls below `−PSD_TOLERANCE`.
    pub fn check_psd(&self) -> Result<()> {
        let lowest = self.min_eigenvalue()?;
        if lowest < -PSD_TOLERANCE {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        Ok(())
    }

    /// Mean excitation number `Tr[n̂ρ]`.
    pub fn mean_excitation(&self) -> f64 {
        (0..self.dim())
            .map(|n| n as f64 * self.rho[(n, n)].re)
            .sum()
    }
}

/// Geometric occupations `(ħ/(Δ+ħ))(Δ/(Δ+ħ))^n` for `n < levels`, renormalized,
/// together with the discarded tail mass.
pub fn geometric_occupations(delta: f64, hbar: f64, levels: usize) -> Result<(Vec<f64>, f64)> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", "must be finite and non-negative"));
    }
    if !(hbar > 0.0) {
        return Err(Error::param("hbar", "must be positive"));
    }
    let ratio = delta / (delta + hbar);
    let first = hbar / (delta + hbar);
    let mut w = Vec::with_capacity(levels);
    let mut term = first;
    for _ in 0..levels {
        w.push(term);
        term *= ratio;
    }
    let tail = libm::pow(ratio, levels as f64);
    let kept = 1.0 - tail;
    for x in &mut w {
        *x /= kept;
    }
    Ok((w, tail))
}

/// Isotropic mixed initial state with mean action `Δ + ħ/2`: diagonal with
/// geometric occupations. Truncation corrections above `1e-10` are rejected.
pub fn initial_mixed_state(delta: f64, spec: &FloquetSpec) -> Result<FockDensityMatrix> {
    let (w, tail) = geometric_occupations(delta, spec.hbar, spec.n_max)?;
    if tail > RENORMALIZATION_LIMIT {
        return Err(Error::Truncation {
            leakage: tail,
            threshold: RENORMALIZATION_LIMIT,
        });
    }
    FockDensityMatrix::diagonal(&w)
}

/// Occupation probabilities `w_n = ⟨n|ρ|n⟩`.
pub fn occupation_distribution(rho: &FockDensityMatrix) -> Vec<f64> {
    rho.matrix().diagonal().iter().map(|z| z.re).collect()
}

/// Result of a truncation adequacy test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    /// `true` when the leakage is below the threshold.
    pub pass: bool,
    /// Occupation of the inspected top levels.
    pub leakage: f64,
}

/// Checks that the top `tail` levels hold less than `1e-8` of the probability.
pub fn truncation_check(rho: &FockDensityMatrix, tail: usize) -> Result<TruncationReport> {
    truncation_check_weights(&occupation_distribution(rho), tail)
}

/// [`truncation_check`] on an occupation vector.
pub fn truncation_check_weights(w: &[f64], tail: usize) -> Result<TruncationReport> {
    if tail == 0 || tail >= w.len() {
        return Err(Error::param("tail", "must be positive and below n_max"));
    }
    let leakage: f64 = w[w.len() - tail..].iter().map(|x| x.max(0.0)).sum();
    Ok(TruncationReport {
        pass: leakage < TRUNCATION_THRESHOLD,
        leakage,
    })
}
