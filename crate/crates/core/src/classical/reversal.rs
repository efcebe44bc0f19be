use alloc::vec::Vec;

use super::ensemble::{evolve_backward, evolve_ensemble, sample_isotropic};
use super::harmonics::PhaseHistogram;
use super::map::MapParams;
use crate::numerics::RandomStream;
use crate::{Error, Result};

/// Grid used to compare initial and returned densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapGrid {
    /// Action bins over `[0, max initial I]`.
    pub n_action_bins: usize,
    /// Angle bins over `[0, 2π)`.
    pub n_theta_bins: usize,
}

impl Default for OverlapGrid {
    fn default() -> Self {
        Self {
            n_action_bins: 32,
            n_theta_bins: 64,
        }
    }
}

/// Outcome of a probe-and-reverse experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalOutcome {
    /// Overlap of returned and initial densities normalized by the initial self-overlap.
    pub fidelity: f64,
    /// Grid on which the overlap was taken.
    pub grid: OverlapGrid,
    /// Upper action edge of the grid.
    pub action_max: f64,
}

/// Forward `t_r` kicks, one random rotation `θ ← θ + ξ` per trajectory with
/// `ξ ~ N(0, probe_sigma²)`, then `t_r` inverse kicks; returns the grid overlap
/// `Σ h_0 h_ret / Σ h_0²` between initial and returned sample densities.
pub fn reversal_experiment(
    params: MapParams,
    init_scale: f64,
    t_r: u64,
    probe_sigma: f64,
    n: usize,
    stream: &RandomStream,
    grid: OverlapGrid,
) -> Result<ReversalOutcome> {
    if t_r == 0 {
        return Err(Error::param("t_r", "must be at least 1"));
    }
    if !(probe_sigma >= 0.0) {
        return Err(Error::param("probe_sigma", "must be non-negative"));
    }
    if grid.n_action_bins == 0 || grid.n_theta_bins == 0 {
        return Err(Error::param("grid", "bin counts must be positive"));
    }
    let e0 = sample_isotropic(init_scale, n, params, &mut stream.substream(0))?;
    let mut e = evolve_ensemble(&e0, t_r, 0.0, stream)?;
    let mut probe = stream.substream(1);
    let kicks: Vec<f64> = (0..n).map(|_| probe_sigma * probe.gaussian()).collect();
    for (p, xi) in e.points.iter_mut().zip(kicks) {
        *p = p.rotated(xi);
    }
    let back = evolve_backward(&e, t_r)?;
    let action_max = e0.points.iter().map(|p| p.action()).fold(0.0, f64::max) * (1.0 + 1e-12);
    let h0 = PhaseHistogram::build(&e0, grid.n_action_bins, grid.n_theta_bins, action_max);
    let h1 = PhaseHistogram::build(&back, grid.n_action_bins, grid.n_theta_bins, action_max);
    let fidelity = h0.overlap(&h1) / h0.overlap(&h0);
    Ok(ReversalOutcome {
        fidelity,
        grid,
        action_max,
    })
}
