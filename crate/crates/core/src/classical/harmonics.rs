use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::ensemble::ClassicalEnsemble;
use crate::metrics::HarmonicSpectrum;
use crate::{Error, Result};

/// Histogram resolution for classical θ-harmonic estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicGrid {
    /// Number of action bins spanning `[0, max I]`.
    pub n_action_bins: usize,
    /// Number of angle bins over `[0, 2π)`.
    pub n_theta_bins: usize,
    /// Highest harmonic estimated.
    pub m_max: usize,
}

impl Default for HarmonicGrid {
    fn default() -> Self {
        Self {
            n_action_bins: 128,
            n_theta_bins: 1024,
            m_max: 128,
        }
    }
}

/// Occupation counts on an `(I, θ)` grid, row-major by action bin.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseHistogram {
    /// Number of action bins.
    pub n_action_bins: usize,
    /// Number of angle bins.
    pub n_theta_bins: usize,
    /// Upper edge of the action range.
    pub action_max: f64,
    /// Counts, `counts[i * n_theta_bins + j]`.
    pub counts: Vec<f64>,
}

impl PhaseHistogram {
    /// Bins the ensemble; points with `I ≥ action_max` are dropped.
    pub fn build(
        e: &ClassicalEnsemble,
        n_action_bins: usize,
        n_theta_bins: usize,
        action_max: f64,
    ) -> Self {
        let mut counts = vec![0.0; n_action_bins * n_theta_bins];
        for p in &e.points {
            let a = p.action() / action_max * n_action_bins as f64;
            if !(a >= 0.0) || a >= n_action_bins as f64 {
                continue;
            }
            let i = a as usize;
            let j = ((p.angle() / TAU * n_theta_bins as f64) as usize).min(n_theta_bins - 1);
            counts[i * n_theta_bins + j] += 1.0;
        }
        Self {
            n_action_bins,
            n_theta_bins,
            action_max,
            counts,
        }
    }

    /// `Σ_cells h_a h_b`.
    ///
    /// # Panics
    /// If the grids differ.
    pub fn overlap(&self, other: &Self) -> f64 {
        assert_eq!(self.counts.len(), other.counts.len(), "grid mismatch");
        self.counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// θ-harmonic weights of a sample density by histogram and discrete Fourier
/// transform over θ in each action bin.
///
/// The action integral becomes a bin sum. Poisson shot noise, whose expected
/// contribution to `|c_m|²` in a bin holding `N_i` samples is `N_i`, is
/// subtracted and negative remainders clamped to zero.
pub fn classical_harmonics(e: &ClassicalEnsemble, grid: HarmonicGrid) -> Result<HarmonicSpectrum> {
    let HarmonicGrid {
        n_action_bins,
        n_theta_bins,
        m_max,
    } = grid;
    if n_action_bins == 0 {
        return Err(Error::param("n_action_bins", "must be positive"));
    }
    if n_theta_bins < 4 * m_max.max(1) {
        return Err(Error::param(
            "n_theta_bins",
            "must be at least 4·m_max to avoid aliasing",
        ));
    }
    let action_max = e.points.iter().map(|p| p.action()).fold(0.0, f64::max);
    let action_max = if action_max > 0.0 {
        action_max * (1.0 + 1e-12)
    } else {
        1.0
    };
    let hist = PhaseHistogram::build(e, n_action_bins, n_theta_bins, action_max);
    let twiddle: Vec<(f64, f64)> = (0..n_theta_bins)
        .map(|j| libm::sincos(TAU * j as f64 / n_theta_bins as f64))
        .collect();
    let mut raw = vec![0.0; m_max + 1];
    for row in hist.counts.chunks(n_theta_bins) {
        let n_i: f64 = row.iter().sum();
        if n_i == 0.0 {
            continue;
        }
        raw[0] += n_i * n_i - n_i;
        for (m, slot) in raw.iter_mut().enumerate().skip(1) {
            let (mut re, mut im) = (0.0, 0.0);
            let mut k = 0usize;
            for &h in row {
                if h != 0.0 {
                    let (s, c) = twiddle[k];
                    re += h * c;
                    im -= h * s;
                }
                k += m;
                if k >= n_theta_bins {
                    k -= n_theta_bins;
                }
            }
            *slot += 2.0 * (re * re + im * im - n_i);
        }
    }
    for w in &mut raw {
        *w = w.max(0.0);
    }
    if raw.iter().all(|&w| w == 0.0) {
        return Ok(HarmonicSpectrum::isotropic());
    }
    HarmonicSpectrum::from_raw(raw)
}
