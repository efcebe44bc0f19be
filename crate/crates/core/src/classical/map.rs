use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest action accepted before a trajectory is declared divergent.
pub const DIVERGENCE_ACTION: f64 = 1e12;

/// Parameters of the kick-and-twist map (kicks at integer times).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    /// Linear frequency `ω0`.
    pub omega0: f64,
    /// Kick strength `g0`.
    pub g0: f64,
}

impl MapParams {
    /// Validated parameters.
    pub fn new(omega0: f64, g0: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::param("omega0", "must be finite"));
        }
        if !g0.is_finite() {
            return Err(Error::param("g0", "must be finite"));
        }
        Ok(Self { omega0, g0 })
    }

    /// Global chaos is expected for `|g0| > 1`.
    pub fn is_chaotic(&self) -> bool {
        self.g0.abs() > 1.0
    }
}

/// Point of the classical phase plane, `α = √I e^{−iθ}`, with the cumulative
/// angle tracked separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    /// Complex amplitude.
    pub alpha: Complex64,
    /// Unwrapped angle `θ`.
    pub theta_unwrapped: f64,
}

impl PhasePoint {
    /// Point with action `I ≥ 0` and angle `θ`.
    pub fn from_action_angle(action: f64, theta: f64) -> Self {
        Self {
            alpha: Complex64::from_polar(libm::sqrt(action.max(0.0)), -theta),
            theta_unwrapped: theta,
        }
    }

    /// Action `I = |α|²`.
    #[inline]
    pub fn action(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Angle reduced to `[0, 2π)`.
    #[inline]
    pub fn angle(&self) -> f64 {
        let r = self.theta_unwrapped % TAU;
        if r < 0.0 {
            r + TAU
        } else {
            r
        }
    }

    /// Rotation `θ ← θ + ξ`.
    #[inline]
    pub fn rotated(self, xi: f64) -> Self {
        Self {
            alpha: self.alpha * Complex64::cis(-xi),
            theta_unwrapped: self.theta_unwrapped + xi,
        }
    }

    fn is_sane(&self) -> bool {
        let i = self.action();
        i.is_finite() && i < DIVERGENCE_ACTION && self.theta_unwrapped.is_finite()
    }
}

#[inline]
fn wrap(x: f64) -> f64 {
    x - TAU * libm::round(x / TAU)
}

/// Adds `shift` to `α`, following the angle continuously.
#[inline]
fn translate(p: PhasePoint, shift: Complex64) -> PhasePoint {
    let alpha = p.alpha + shift;
    let target = -alpha.arg();
    let delta = wrap(target - p.theta_unwrapped);
    let delta = if delta == -PI { PI } else { delta };
    PhasePoint {
        alpha,
        theta_unwrapped: p.theta_unwrapped + delta,
    }
}

#[inline]
fn twist(p: PhasePoint, omega0: f64, direction: f64) -> PhasePoint {
    let phi = direction * (omega0 + 2.0 * p.action());
    PhasePoint {
        alpha: p.alpha * Complex64::cis(-phi),
        theta_unwrapped: p.theta_unwrapped + phi,
    }
}

/// One period: kick `α ← α + i g0`, then twist `θ ← θ + ω0 + 2I`.
pub fn map_step(p: PhasePoint, params: &MapParams) -> Result<PhasePoint> {
    let out = twist(
        translate(p, Complex64::new(0.0, params.g0)),
        params.omega0,
        1.0,
    );
    if out.is_sane() {
        Ok(out)
    } else {
        Err(Error::Divergence { step: 0 })
    }
}

/// Exact inverse of [`map_step`]: untwist, then un-kick.
pub fn inverse_map_step(p: PhasePoint, params: &MapParams) -> Result<PhasePoint> {
    let out = translate(
        twist(p, params.omega0, -1.0),
        Complex64::new(0.0, -params.g0),
    );
    if out.is_sane() {
        Ok(out)
    } else {
        Err(Error::Divergence { step: 0 })
    }
}

/// Real 2×2 Jacobian of [`map_step`] in the coordinates `(Re α, Im α)`.
pub fn map_jacobian(p: PhasePoint, params: &MapParams) -> [[f64; 2]; 2] {
    let kicked = p.alpha + Complex64::new(0.0, params.g0);
    let (x, y) = (kicked.re, kicked.im);
    let phi = params.omega0 + 2.0 * kicked.norm_sqr();
    let (s, c) = libm::sincos(phi);
    let m = [
        [1.0 + 4.0 * x * y, 4.0 * y * y],
        [-4.0 * x * x, 1.0 - 4.0 * x * y],
    ];
    [
        [c * m[0][0] + s * m[1][0], c * m[0][1] + s * m[1][1]],
        [-s * m[0][0] + c * m[1][0], -s * m[0][1] + c * m[1][1]],
    ]
}

/// `t_E = τ_c ln(2⟨I⟩/ħ)`: how long quantum expectation values follow the
/// classical chaotic flow.
pub fn ehrenfest_time(tau_c: f64, mean_action: f64, hbar: f64) -> Result<f64> {
    if !(tau_c > 0.0) {
        return Err(Error::param("tau_c", "must be positive"));
    }
    if !(mean_action > 0.0) {
        return Err(Error::param("mean_action", "must be positive"));
    }
    if !(hbar > 0.0) {
        return Err(Error::param("hbar", "must be positive"));
    }
    Ok(tau_c * libm::log(2.0 * mean_action / hbar))
}
