use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Parameters of the quantum kicked oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetSpec {
    /// Linear frequency `ω0`.
    pub omega0: f64,
    /// Kick strength `g0`.
    pub g0: f64,
    /// Effective Planck constant.
    pub hbar: f64,
    /// Number of Fock levels kept.
    pub n_max: usize,
}

impl FloquetSpec {
    /// Smallest admissible truncation.
    pub const MIN_LEVELS: usize = 16;

    /// Validated parameters.
    pub fn new(omega0: f64, g0: f64, hbar: f64, n_max: usize) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::param("omega0", "must be finite"));
        }
        if !g0.is_finite() {
            return Err(Error::param("g0", "must be finite"));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::param("hbar", "must be positive"));
        }
        if n_max < Self::MIN_LEVELS {
            return Err(Error::param("n_max", "must be at least 16"));
        }
        Ok(Self {
            omega0,
            g0,
            hbar,
            n_max,
        })
    }

    /// Same parameters with another truncation.
    pub fn with_levels(self, n_max: usize) -> Result<Self> {
        Self::new(self.omega0, self.g0, self.hbar, n_max)
    }

    /// Displacement argument `i g0/√ħ` of the kick.
    pub fn kick_amplitude(&self) -> Complex64 {
        Complex64::new(0.0, self.g0 / libm::sqrt(self.hbar))
    }

    /// Twist phases `e^{−i(ω0 n + ħ n²)}` for `n < n_max`.
    pub fn twist_phases(&self) -> Vec<Complex64> {
        (0..self.n_max)
            .map(|n| {
                let n = n as f64;
                Complex64::cis(-(self.omega0 * n + self.hbar * n * n))
            })
            .collect()
    }
}
