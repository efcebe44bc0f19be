use crate::{Error, Result};

/// Orthogonal or unitary symmetry of the doorway ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    /// Time-reversal invariant.
    Goe,
    /// Broken time-reversal symmetry.
    Gue,
}

/// Channel counts and background parameters for the weak-localization
/// correction, all in units of the inverse Heisenberg time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakLocParams {
    /// Channels in lead 1.
    pub m1: u32,
    /// Channels in lead 2.
    pub m2: u32,
    /// Dimensionless spreading width `γ_s`.
    pub gamma_s: f64,
    /// Absorption `κ`.
    pub kappa: f64,
}

impl WeakLocParams {
    /// Validated parameters.
    pub fn new(m1: u32, m2: u32, gamma_s: f64, kappa: f64) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::param("m", "each lead needs at least one channel"));
        }
        if !(gamma_s > 0.0 && gamma_s.is_finite()) {
            return Err(Error::param("gamma_s", "must be positive"));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::param("kappa", "must be non-negative"));
        }
        Ok(Self {
            m1,
            m2,
            gamma_s,
            kappa,
        })
    }

    /// Total channel count `M`.
    pub fn m(&self) -> u32 {
        self.m1 + self.m2
    }
}

/// Value and first two derivatives of
/// `h(x) = (1/x)[1 − √(κs/4) / √(x + (κ/4s)(x+s)²)]`.
pub fn bracket_derivatives(x: f64, kappa: f64, s: f64) -> (f64, f64, f64) {
    let c = libm::sqrt(0.25 * kappa * s);
    let a = if kappa == 0.0 { 0.0 } else { kappa / (4.0 * s) };
    let q = x + a * (x + s) * (x + s);
    let q1 = 1.0 + 2.0 * a * (x + s);
    let q2 = 2.0 * a;
    let rq = libm::sqrt(q);
    let p1 = 1.0 / rq;
    let p3 = p1 / q;
    let p5 = p3 / q;
    let r = 1.0 - c * p1;
    let r1 = 0.5 * c * p3 * q1;
    let r2 = 0.5 * c * (-1.5 * p5 * q1 * q1 + p3 * q2);
    let h = r / x;
    let h1 = r1 / x - r / (x * x);
    let h2 = r2 / x - 2.0 * r1 / (x * x) + 2.0 * r / (x * x * x);
    (h, h1, h2)
}

/// Averaged absorption-corrected cross section split into its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSigma {
    /// `∫dΓ w(Γ)/Γ`, independent of `κ`.
    pub baseline: f64,
    /// Absorption-induced change.
    pub correction: f64,
}

impl DeltaSigma {
    /// Baseline plus correction.
    pub fn total(&self) -> f64 {
        self.baseline + self.correction
    }
}

/// Heisenberg time `2π/D` of a doorway spectrum with spacing `D`.
pub fn heisenberg_time(big_d: f64) -> f64 {
    core::f64::consts::TAU / big_d
}

/// Weisskopf width `M·D/2π` for `M` channels with unit transmission.
pub fn weisskopf_width(m: u32, big_d: f64) -> f64 {
    f64::from(m) * big_d / core::f64::consts::TAU
}

/// Width-distribution average of `(1/Γ)[1 − √(κΓ_s/4)/√(Γ + (κ/4Γ_s)(Γ+Γ_s)²)]`.
///
/// The distribution is its large-`M` expansion around `Γ_W`; the orthogonal
/// class adds the `δ'` and `δ''` terms weighted by `1/t_H` and `M/t_H²`.
pub fn delta_sigma(
    kappa: f64,
    gamma_s: f64,
    class: SymmetryClass,
    m: u32,
    t_h: f64,
    gamma_w: f64,
) -> Result<DeltaSigma> {
    if m < 2 {
        return Err(Error::param("m", "at least two channels"));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::param("kappa", "must be non-negative"));
    }
    if !(gamma_s > 0.0 && gamma_s.is_finite()) {
        return Err(Error::param("gamma_s", "must be positive"));
    }
    if !(t_h > 0.0 && gamma_w > 0.0) {
        return Err(Error::param(
            "t_h",
            "Heisenberg time and Weisskopf width must be positive",
        ));
    }
    let x = gamma_w;
    let (h, h1, h2) = bracket_derivatives(x, kappa, gamma_s);
    let (b, b1, b2) = (1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
    let combine = |f: f64, f1: f64, f2: f64| match class {
        SymmetryClass::Gue => f,
        SymmetryClass::Goe => f + 2.0 / t_h * f1 + f64::from(m) / (2.0 * t_h * t_h) * f2,
    };
    let baseline = combine(b, b1, b2);
    Ok(DeltaSigma {
        baseline,
        correction: combine(h, h1, h2) - baseline,
    })
}

/// Weak-localization correction to the conductance,
/// `M₁M₂ (2 d/dμ + (μ/2) d²/dμ²) h(μ)` at `μ = M`.
///
/// Equals `M₁M₂ (σ_GOE − σ_GUE)/t_H` from [`delta_sigma`] at `Γ_W t_H = M`.
pub fn weak_localization(w: &WeakLocParams) -> f64 {
    let mu = f64::from(w.m());
    let (_, h1, h2) = bracket_derivatives(mu, w.kappa, w.gamma_s);
    f64::from(w.m1) * f64::from(w.m2) * (2.0 * h1 + 0.5 * mu * h2)
}
