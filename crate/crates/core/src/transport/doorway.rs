use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::absorption::AbsorptionParams;
use super::loops::{loop_g, loop_l};
use crate::{Error, Result};

/// Isolated doorway resonance coupled to two leads and to an equidistant
/// background spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DoorwayParams {
    /// Doorway energy `E_res`, measured from the background Fermi level.
    pub e_res: f64,
    /// Partial widths `Γ^c` of the lead-1 channels.
    pub lead1: Vec<f64>,
    /// Partial widths `Γ^c` of the lead-2 channels.
    pub lead2: Vec<f64>,
    /// Spreading width `Γ_s`.
    pub gamma_s: f64,
    /// Background level spacing `d`.
    pub d: f64,
}

impl DoorwayParams {
    /// Validated parameters.
    pub fn new(e_res: f64, lead1: Vec<f64>, lead2: Vec<f64>, gamma_s: f64, d: f64) -> Result<Self> {
        if !e_res.is_finite() {
            return Err(Error::param("e_res", "must be finite"));
        }
        if lead1.is_empty() || lead2.is_empty() {
            return Err(Error::param(
                "gamma_channels",
                "each lead needs at least one channel",
            ));
        }
        if lead1
            .iter()
            .chain(&lead2)
            .any(|&g| !(g > 0.0 && g.is_finite()))
        {
            return Err(Error::param(
                "gamma_channels",
                "partial widths must be positive",
            ));
        }
        if !(gamma_s >= 0.0 && gamma_s.is_finite()) {
            return Err(Error::param("gamma_s", "must be non-negative"));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::param("d", "must be positive"));
        }
        Ok(Self {
            e_res,
            lead1,
            lead2,
            gamma_s,
            d,
        })
    }

    /// Total width of lead 1.
    pub fn gamma1(&self) -> f64 {
        self.lead1.iter().sum()
    }

    /// Total width of lead 2.
    pub fn gamma2(&self) -> f64 {
        self.lead2.iter().sum()
    }

    /// Total escape width `Γ = Σ Γ^c`.
    pub fn gamma(&self) -> f64 {
        self.gamma1() + self.gamma2()
    }

    /// Number of channels over both leads.
    pub fn channels(&self) -> usize {
        self.lead1.len() + self.lead2.len()
    }

    /// Partial width of channel `c` (lead-1 channels first).
    pub fn channel_width(&self, c: usize) -> Result<f64> {
        self.lead1
            .iter()
            .chain(&self.lead2)
            .nth(c)
            .copied()
            .ok_or(Error::param("channel", "index out of range"))
    }

    /// `Λ(E) = (E − E_res)² + (Γ + Γ_s)²/4`.
    pub fn lambda(&self, energy: f64) -> f64 {
        let w = self.gamma() + self.gamma_s;
        let x = energy - self.e_res;
        x * x + 0.25 * w * w
    }

    fn fine_bracket(&self, energy: f64) -> Result<f64> {
        Ok(energy - self.e_res - 0.5 * self.gamma_s * loop_g(energy, self.d)?)
    }
}

/// Roots of `E − E_res − (Γ_s/2) cot(πE/d) = 0` inside `[lo, hi]`, one per
/// inter-pole interval, by bisection to `1e-12·d`.
pub fn fine_structure_roots(p: &DoorwayParams, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::param("window", "must be a bounded interval"));
    }
    let d = p.d;
    let first = libm::floor(lo / d) as i64;
    let last = libm::ceil(hi / d) as i64;
    let residual =
        |e: f64| e - p.e_res - 0.5 * p.gamma_s * libm::cos(PI * e / d) / libm::sin(PI * e / d);
    let mut roots = Vec::new();
    for k in first..last {
        let (mut a, mut b) = (k as f64 * d, (k + 1) as f64 * d);
        if p.gamma_s == 0.0 {
            let e = p.e_res;
            if e > a && e < b && e >= lo && e <= hi {
                roots.push(e);
            }
            continue;
        }
        let guard = 1e-14 * d.max(a.abs());
        a += guard;
        b -= guard;
        while b - a > 1e-12 * d {
            let mid = 0.5 * (a + b);
            if residual(mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let root = 0.5 * (a + b);
        if root >= lo && root <= hi {
            roots.push(root);
        }
    }
    Ok(roots)
}

/// Fine-structure cross section
/// `Γ^aΓ^b / ([E − E_res − (Γ_s/2)cot(πE/d)]² + Γ²/4)`.
pub fn cross_section_fine(energy: f64, p: &DoorwayParams, a: usize, b: usize) -> Result<f64> {
    let x = p.fine_bracket(energy)?;
    let g = p.gamma();
    Ok(p.channel_width(a)? * p.channel_width(b)? / (x * x + 0.25 * g * g))
}

/// Fine-structure Wigner delay
/// `Γ[1 + (πΓ_s/2d) sin^{−2}(πE/d)] / ([E − E_res − (Γ_s/2)cot(πE/d)]² + Γ²/4)`.
pub fn wigner_delay_fine(energy: f64, p: &DoorwayParams) -> Result<f64> {
    let x = p.fine_bracket(energy)?;
    let g = p.gamma();
    let l = loop_l(energy, p.d)?;
    Ok(g * (1.0 + 0.5 * p.gamma_s * l) / (x * x + 0.25 * g * g))
}

/// Energy-averaged cross section split into its direct and re-emitted parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedCrossSection {
    /// Decay of the widened doorway straight into the channel.
    pub direct: f64,
    /// Particles re-injected from the background.
    pub reemitted: f64,
}

impl AveragedCrossSection {
    /// Sum of both parts.
    pub fn total(&self) -> f64 {
        self.direct + self.reemitted
    }
}

/// `(1 + Γ_s/Γ) Γ^aΓ^b / ((E − E_res)² + (Γ+Γ_s)²/4)`.
pub fn averaged_cross_section(
    energy: f64,
    p: &DoorwayParams,
    a: usize,
    b: usize,
) -> Result<AveragedCrossSection> {
    let base = p.channel_width(a)? * p.channel_width(b)? / p.lambda(energy);
    Ok(AveragedCrossSection {
        direct: base,
        reemitted: base * p.gamma_s / p.gamma(),
    })
}

/// `(Γ + Γ_s)/((E − E_res)² + (Γ+Γ_s)²/4) + 2π/d`.
///
/// The constant background term survives `Γ_s → 0`, as printed.
pub fn averaged_delay(energy: f64, p: &DoorwayParams) -> f64 {
    (p.gamma() + p.gamma_s) / p.lambda(energy) + 2.0 * PI / p.d
}

/// Two-lead conductance with its partial transmissions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductance {
    /// Total `G = T_12 + T_1s T_s2/(T_1s + T_s2)`.
    pub g: f64,
    /// Direct lead-to-lead transmission.
    pub t12: f64,
    /// Lead 1 to background.
    pub t1s: f64,
    /// Background to lead 2.
    pub ts2: f64,
}

/// Conductance through the doorway with background absorption `κ`.
pub fn conductance(energy: f64, p: &DoorwayParams, abs: &AbsorptionParams) -> Conductance {
    let lam = p.lambda(energy);
    let g = p.gamma();
    let t12 = p.gamma1() * p.gamma2() / lam;
    let damping = if p.gamma_s > 0.0 {
        1.0 / (1.0 + abs.kappa * lam / (g * p.gamma_s))
    } else {
        0.0
    };
    let t1s = p.gamma_s * p.gamma1() / lam * damping;
    let ts2 = p.gamma_s * p.gamma2() / lam * damping;
    let reemitted = if t1s + ts2 > 0.0 {
        t1s * ts2 / (t1s + ts2)
    } else {
        0.0
    };
    Conductance {
        g: t12 + reemitted,
        t12,
        t1s,
        ts2,
    }
}

/// Resonant denominator with quasi-particle damping:
/// `E − E_res − (Γ_s/2)(1−ξ²)η/(1+ξ²η²) + (i/2)[Γ + Γ_s ξ(1+η²)/(1+ξ²η²)]`, `η = cot(πE/d)`.
pub fn resonant_denominator(
    energy: f64,
    p: &DoorwayParams,
    abs: &AbsorptionParams,
) -> Result<Complex64> {
    let eta = loop_g(energy, p.d)?;
    let xi = abs.xi;
    let denom = 1.0 + xi * xi * eta * eta;
    let re = energy - p.e_res - 0.5 * p.gamma_s * (1.0 - xi * xi) * eta / denom;
    let im = 0.5 * (p.gamma() + p.gamma_s * xi * (1.0 + eta * eta) / denom);
    Ok(Complex64::new(re, im))
}
