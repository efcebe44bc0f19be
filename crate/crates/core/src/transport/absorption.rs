use core::f64::consts::PI;

use crate::{Error, Result};

/// Background absorption from quasi-particle decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionParams {
    /// Quasi-particle width `Γ_e`.
    pub gamma_e: f64,
    /// `ξ = tanh(πΓ_e/2d)`.
    pub xi: f64,
    /// `κ = 4ξ/(1−ξ)²`.
    pub kappa: f64,
    /// `γ_e = 2πΓ_e/d`, the width in units of the inverse Heisenberg time.
    pub gamma_e_dimless: f64,
}

impl AbsorptionParams {
    /// No absorption.
    pub const NONE: Self = Self {
        gamma_e: 0.0,
        xi: 0.0,
        kappa: 0.0,
        gamma_e_dimless: 0.0,
    };

    /// Parameters with `κ` given directly, `ξ` recovered by inversion.
    pub fn from_kappa(kappa: f64, d: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::param("kappa", "must be non-negative"));
        }
        if !(d > 0.0) {
            return Err(Error::param("d", "must be positive"));
        }
        let gamma_e_dimless = libm::log1p(kappa);
        let gamma_e = gamma_e_dimless * d / (2.0 * PI);
        Ok(Self {
            gamma_e,
            xi: libm::tanh(0.25 * gamma_e_dimless),
            kappa,
            gamma_e_dimless,
        })
    }

    /// Whether `γ_e ≤ 1`, where the quasi-particle picture holds.
    pub fn quasi_particle_valid(&self) -> bool {
        self.gamma_e_dimless <= 1.0
    }
}

/// Absorption parameters from the quasi-particle width.
pub fn kappa_of(gamma_e: f64, d: f64) -> Result<AbsorptionParams> {
    if !(gamma_e >= 0.0 && gamma_e.is_finite()) {
        return Err(Error::param("gamma_e", "must be non-negative"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::param("d", "must be positive"));
    }
    let y = PI * gamma_e / (2.0 * d);
    let xi = libm::tanh(y);
    // 1 − ξ written without cancellation.
    let one_minus_xi = 2.0 / (libm::exp(2.0 * y) + 1.0);
    let kappa = 4.0 * xi / (one_minus_xi * one_minus_xi);
    Ok(AbsorptionParams {
        gamma_e,
        xi,
        kappa,
        gamma_e_dimless: 2.0 * PI * gamma_e / d,
    })
}
