use core::f64::consts::PI;

use crate::{Error, Result};

/// Closest allowed approach to a pole, in units of the spacing.
pub const POLE_GUARD: f64 = 1e-12;

fn pole_safe(energy: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::param("d", "spacing must be positive"));
    }
    let x = energy / d;
    let distance = (x - libm::round(x)).abs();
    if distance < POLE_GUARD {
        return Err(Error::PoleProximity { energy, distance });
    }
    Ok(PI * x)
}

/// Picket-fence loop function `g(E) = cot(πE/d)`.
pub fn loop_g(energy: f64, d: f64) -> Result<f64> {
    let (s, c) = libm::sincos(pole_safe(energy, d)?);
    Ok(c / s)
}

/// Picket-fence loop function `l(E) = (π/d) sin^{−2}(πE/d)`.
pub fn loop_l(energy: f64, d: f64) -> Result<f64> {
    let s = libm::sin(pole_safe(energy, d)?);
    Ok(PI / d / (s * s))
}

/// Mean of `f` over the pole-to-pole period of width `d` containing
/// `center`, by the midpoint rule with `points` nodes.
pub fn period_average<F: FnMut(f64) -> Result<f64>>(
    center: f64,
    d: f64,
    points: usize,
    mut f: F,
) -> Result<f64> {
    if !(d > 0.0) || points == 0 {
        return Err(Error::param(
            "points",
            "need a positive spacing and at least one node",
        ));
    }
    let start = libm::floor(center / d) * d;
    let h = d / points as f64;
    let mut sum = 0.0;
    for k in 0..points {
        sum += f(start + (k as f64 + 0.5) * h)?;
    }
    Ok(sum / points as f64)
}
