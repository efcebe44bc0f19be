//! Classical and quantum position densities of a harmonic well and their
//! reconciliation by incoherent averaging.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Highest level accepted by the Hermite recurrence.
pub const MAX_LEVEL: u64 = 10_000;

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2001;

/// Harmonic well `V(x) = mω²x²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSpec {
    /// Particle mass.
    pub mass: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Reduced Planck constant.
    pub hbar: f64,
}

impl WellSpec {
    /// Validated well.
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be positive"));
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    /// Oscillator length `√(ħ/mω)`.
    pub fn length(&self) -> f64 {
        libm::sqrt(self.hbar / (self.mass * self.omega))
    }

    /// Level energy `ħω(n + ½)`.
    pub fn energy(&self, n: u64) -> f64 {
        self.hbar * self.omega * (n as f64 + 0.5)
    }

    /// Classical turning amplitude at level `n`.
    pub fn amplitude(&self, n: u64) -> f64 {
        self.length() * libm::sqrt(2.0 * n as f64 + 1.0)
    }

    /// Classical momentum `p_c(x)` at level `n`, zero outside the allowed region.
    pub fn momentum(&self, n: u64, x: f64) -> f64 {
        let e = self.energy(n) - 0.5 * self.mass * self.omega * self.omega * x * x;
        libm::sqrt(2.0 * self.mass * e.max(0.0))
    }
}

/// Uniform position grid; each point stands for the cell of width `step` around it.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionGrid {
    start: f64,
    step: f64,
    len: usize,
}

impl PositionGrid {
    /// `len` points spanning `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, len: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::param("half_width", "must be positive"));
        }
        if len < 3 {
            return Err(Error::param("points", "at least three"));
        }
        Ok(Self {
            start: -half_width,
            step: 2.0 * half_width / (len - 1) as f64,
            len,
        })
    }

    /// Default grid for level `n`: 2001 points over `±1.5A`, widened to cover
    /// at least eight oscillator lengths past the turning point.
    pub fn for_level(well: &WellSpec, n: u64) -> Self {
        let a = well.amplitude(n);
        let half = (1.5 * a).max(a + 8.0 * well.length());
        Self {
            start: -half,
            step: 2.0 * half / (DEFAULT_POINTS - 1) as f64,
            len: DEFAULT_POINTS,
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; grids hold at least three points.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Spacing.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Position of point `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// All positions.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.x(i)).collect()
    }
}

/// Density sampled on a [`PositionGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    /// Sampling grid.
    pub grid: PositionGrid,
    /// Values at the grid points.
    pub values: Vec<f64>,
}

impl Density {
    /// Midpoint-rule integral.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.step
    }

    /// Largest value.
    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest value over `|x| ≤ radius`.
    pub fn peak_within(&self, radius: f64) -> f64 {
        self.inner(radius).map(|(_, v)| v).fold(0.0, f64::max)
    }

    /// Max-norm distance to `other` over `|x| ≤ radius`.
    pub fn distance_within(&self, other: &Density, radius: f64) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::LengthMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        Ok(self
            .inner(radius)
            .map(|(i, v)| (v - other.values[i]).abs())
            .fold(0.0, f64::max))
    }

    fn inner(&self, radius: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.grid.x(*i).abs() <= radius)
            .map(|(i, &v)| (i, v))
    }
}

/// Classical density `mω/(π p_c(x))` at level `n`, zero outside the turning
/// points. Grid values are cell averages, so the endpoint singularity is
/// integrated exactly.
pub fn classical_density(well: &WellSpec, n: u64, grid: &PositionGrid) -> Density {
    let a = well.amplitude(n);
    let h = grid.step();
    let asin = |x: f64| libm::asin((x / a).clamp(-1.0, 1.0));
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            (asin(x + 0.5 * h) - asin(x - 0.5 * h)) / (PI * h)
        })
        .collect();
    Density {
        grid: grid.clone(),
        values,
    }
}

/// Classical density at a single point.
pub fn classical_density_at(well: &WellSpec, n: u64, x: f64) -> f64 {
    let p = well.momentum(n, x);
    if p > 0.0 {
        well.mass * well.omega / (PI * p)
    } else {
        0.0
    }
}

/// `|ψ_n(x)|²` of the dimensionless Hermite function, by the normalized
/// three-term recurrence with a running logarithmic scale.
fn hermite_density(n: u64, xi: f64) -> f64 {
    const BIG: f64 = 1e150;
    let (mut cur, mut prev) = (1.0f64, 0.0f64);
    let mut log_scale = -0.5 * xi * xi - 0.25 * libm::log(PI);
    for k in 0..n {
        let kf = k as f64;
        let next = libm::sqrt(2.0 / (kf + 1.0)) * xi * cur - libm::sqrt(kf / (kf + 1.0)) * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            log_scale += libm::log(BIG);
        }
    }
    if cur == 0.0 {
        return 0.0;
    }
    libm::exp(2.0 * (libm::log(cur.abs()) + log_scale))
}

fn check_level(n: u64) -> Result<()> {
    if n > MAX_LEVEL {
        return Err(Error::Overflow {
            context: "Hermite recurrence beyond level 10^4",
        });
    }
    Ok(())
}

/// Quantum density `|ψ_n(x)|²`.
pub fn quantum_density(well: &WellSpec, n: u64, grid: &PositionGrid) -> Result<Density> {
    check_level(n)?;
    let l = well.length();
    let values = (0..grid.len())
        .map(|i| hermite_density(n, grid.x(i) / l) / l)
        .collect();
    Ok(Density {
        grid: grid.clone(),
        values,
    })
}

/// Uniform incoherent mixture of `|ψ_n|²` over `n ∈ [n_center − dn, n_center + dn]`.
pub fn mixed_density(
    well: &WellSpec,
    n_center: u64,
    dn: u64,
    grid: &PositionGrid,
) -> Result<Density> {
    let lo = n_center
        .checked_sub(dn)
        .ok_or(Error::param("dn", "window extends below the ground state"))?;
    check_level(n_center + dn)?;
    let mut acc = alloc::vec![0.0; grid.len()];
    for n in lo..=n_center + dn {
        for (a, v) in acc.iter_mut().zip(quantum_density(well, n, grid)?.values) {
            *a += v;
        }
    }
    let count = (2 * dn + 1) as f64;
    acc.iter_mut().for_each(|a| *a /= count);
    Ok(Density {
        grid: grid.clone(),
        values: acc,
    })
}

/// Boxcar average of `|ψ_n|²` over windows of width `πħ/p_c(x)` centred on
/// each grid point; the width is capped at the turning amplitude.
pub fn position_averaged_density(well: &WellSpec, n: u64, grid: &PositionGrid) -> Result<Density> {
    let q = quantum_density(well, n, grid)?;
    let h = grid.step();
    let mut cumulative = Vec::with_capacity(grid.len() + 1);
    cumulative.push(0.0);
    for &v in &q.values {
        cumulative.push(cumulative.last().copied().unwrap_or(0.0) + v * h);
    }
    // Cumulative integral at position x, linear between cell edges.
    let cum_at = |x: f64| {
        let s = ((x - grid.x(0)) / h + 0.5).clamp(0.0, grid.len() as f64);
        let k = (libm::floor(s) as usize).min(grid.len() - 1);
        cumulative[k] + (s - k as f64) * (cumulative[k + 1] - cumulative[k])
    };
    let cap = well.amplitude(n);
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            let p = well.momentum(n, x);
            let width = if p > 0.0 {
                (PI * well.hbar / p).min(cap)
            } else {
                cap
            }
            .max(h);
            (cum_at(x + 0.5 * width) - cum_at(x - 0.5 * width)) / width
        })
        .collect();
    Ok(Density {
        grid: grid.clone(),
        values,
    })
}
