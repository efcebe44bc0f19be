use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use super::map::{inverse_map_step, map_step, MapParams, PhasePoint};
use crate::metrics::MetricSeries;
use crate::numerics::RandomStream;
use crate::{Error, Result};

/// Samples of the classical phase-space distribution at a given kick count.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEnsemble {
    /// Trajectories, in index order.
    pub points: Vec<PhasePoint>,
    /// Map parameters.
    pub params: MapParams,
    /// Number of kicks applied so far.
    pub time: u64,
}

impl ClassicalEnsemble {
    /// Wraps points at time zero; rejects empty or non-finite input.
    pub fn new(points: Vec<PhasePoint>, params: MapParams) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("points", "ensemble must be non-empty"));
        }
        if points
            .iter()
            .any(|p| !p.action().is_finite() || !p.theta_unwrapped.is_finite())
        {
            return Err(Error::param("points", "must be finite"));
        }
        Ok(Self {
            points,
            params,
            time: 0,
        })
    }

    /// Number of trajectories.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always `false`: ensembles are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Isotropic ensemble: `I` exponential with mean `scale`, `θ` uniform.
pub fn sample_isotropic(
    scale: f64,
    n: usize,
    params: MapParams,
    stream: &mut RandomStream,
) -> Result<ClassicalEnsemble> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::param("scale", "must be positive"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let points = (0..n)
        .map(|_| {
            let action = stream.exponential(scale);
            let theta = TAU * stream.uniform();
            PhasePoint::from_action_angle(action, theta)
        })
        .collect();
    ClassicalEnsemble::new(points, params)
}

#[cfg(feature = "parallel")]
fn for_each_point<F>(points: &mut [PhasePoint], f: F) -> Result<()>
where
    F: Fn(&mut PhasePoint) -> Result<()> + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter_mut().try_for_each(f)
}

#[cfg(not(feature = "parallel"))]
fn for_each_point<F>(points: &mut [PhasePoint], f: F) -> Result<()>
where
    F: Fn(&mut PhasePoint) -> Result<()>,
{
    points.iter_mut().try_for_each(f)
}

#[cfg(feature = "parallel")]
fn for_each_trajectory<F>(points: &mut [PhasePoint], rngs: &mut [RandomStream], f: F) -> Result<()>
where
    F: Fn(&mut PhasePoint, &mut RandomStream) -> Result<()> + Sync + Send,
{
    use rayon::prelude::*;
    points
        .par_iter_mut()
        .zip(rngs.par_iter_mut())
        .try_for_each(|(p, r)| f(p, r))
}

#[cfg(not(feature = "parallel"))]
fn for_each_trajectory<F>(points: &mut [PhasePoint], rngs: &mut [RandomStream], f: F) -> Result<()>
where
    F: Fn(&mut PhasePoint, &mut RandomStream) -> Result<()>,
{
    points
        .iter_mut()
        .zip(rngs.iter_mut())
        .try_for_each(|(p, r)| f(p, r))
}

/// Steps an ensemble kick by kick with optional angular noise.
///
/// Trajectory `i` draws its noise from `stream.substream(i)`, so results do
/// not depend on iteration order or thread count.
#[derive(Debug, Clone)]
pub struct EnsembleEvolver {
    ensemble: ClassicalEnsemble,
    noise_sigma: f64,
    rngs: Vec<RandomStream>,
}

impl EnsembleEvolver {
    /// Prepares evolution with `θ ← θ + ξ`, `ξ ~ N(0, σ²)`, after every kick.
    pub fn new(
        ensemble: ClassicalEnsemble,
        noise_sigma: f64,
        stream: &RandomStream,
    ) -> Result<Self> {
        if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
            return Err(Error::param(
                "noise_sigma",
                "must be finite and non-negative",
            ));
        }
        let rngs = if noise_sigma > 0.0 {
            (0..ensemble.len() as u64)
                .map(|i| stream.substream(i))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            ensemble,
            noise_sigma,
            rngs,
        })
    }

    /// Current ensemble.
    pub fn ensemble(&self) -> &ClassicalEnsemble {
        &self.ensemble
    }

    /// Consumes the evolver.
    pub fn into_ensemble(self) -> ClassicalEnsemble {
        self.ensemble
    }

    /// One kick (plus noise).
    pub fn step(&mut self) -> Result<()> {
        let params = self.ensemble.params;
        let sigma = self.noise_sigma;
        let time = self.ensemble.time;
        let fail = |_| Error::Divergence { step: time + 1 };
        if sigma > 0.0 {
            for_each_trajectory(&mut self.ensemble.points, &mut self.rngs, |p, r| {
                *p = map_step(*p, &params)
                    .map_err(fail)?
                    .rotated(sigma * r.gaussian());
                Ok(())
            })?;
        } else {
            for_each_point(&mut self.ensemble.points, |p| {
                *p = map_step(*p, &params).map_err(fail)?;
                Ok(())
            })?;
        }
        self.ensemble.time += 1;
        Ok(())
    }
}

/// `t` kicks of the map, each followed by Gaussian angular noise of width
/// `noise_sigma` when positive.
pub fn evolve_ensemble(
    e: &ClassicalEnsemble,
    t: u64,
    noise_sigma: f64,
    stream: &RandomStream,
) -> Result<ClassicalEnsemble> {
    let mut ev = EnsembleEvolver::new(e.clone(), noise_sigma, stream)?;
    for _ in 0..t {
        ev.step()?;
    }
    Ok(ev.into_ensemble())
}

/// `t` inverse kicks, noise-free.
pub fn evolve_backward(e: &ClassicalEnsemble, t: u64) -> Result<ClassicalEnsemble> {
    let mut out = e.clone();
    for k in 0..t {
        let params = out.params;
        let step = e.time.saturating_sub(k);
        for_each_point(&mut out.points, |p| {
            *p = inverse_map_step(*p, &params).map_err(|_| Error::Divergence { step })?;
            Ok(())
        })?;
        out.time = out.time.saturating_sub(1);
    }
    Ok(out)
}

/// Sample mean of the action.
pub fn mean_action(e: &ClassicalEnsemble) -> f64 {
    e.points.iter().map(PhasePoint::action).sum::<f64>() / e.len() as f64
}

/// Sample variance of the action.
pub fn action_variance(e: &ClassicalEnsemble) -> f64 {
    let m = mean_action(e);
    e.points
        .iter()
        .map(|p| {
            let d = p.action() - m;
            d * d
        })
        .sum::<f64>()
        / e.len() as f64
}

/// `|⟨e^{i q (θ(t) − θ(0))}⟩|²` between matched trajectories of two ensembles.
///
/// # Panics
/// If the ensembles have different sizes.
pub fn phase_correlation_at(
    initial: &ClassicalEnsemble,
    evolved: &ClassicalEnsemble,
    q: f64,
) -> f64 {
    assert_eq!(initial.len(), evolved.len(), "ensembles must be matched");
    let sum: Complex64 = initial
        .points
        .iter()
        .zip(&evolved.points)
        .map(|(a, b)| Complex64::cis(q * (b.theta_unwrapped - a.theta_unwrapped)))
        .sum();
    (sum / initial.len() as f64).norm_sqr()
}

/// `|⟨e^{i(θ(t) − θ(0))}⟩|²` after `t` noise-free kicks of `e0`.
pub fn phase_correlation(e0: &ClassicalEnsemble, t: u64) -> Result<f64> {
    let et = evolve_ensemble(e0, t, 0.0, &RandomStream::new(0, 0))?;
    Ok(phase_correlation_at(e0, &et, 1.0))
}

/// Phase correlation with angular multiplier `q` at every `t ∈ [0, t_max]`.
pub fn phase_correlation_series(
    e0: &ClassicalEnsemble,
    t_max: u64,
    q: f64,
) -> Result<MetricSeries> {
    let mut series = MetricSeries::new("phase_correlation");
    let mut ev = EnsembleEvolver::new(e0.clone(), 0.0, &RandomStream::new(0, 0))?;
    series.push(0, 1.0);
    for t in 1..=t_max {
        ev.step()?;
        series.push(t, phase_correlation_at(e0, ev.ensemble(), q));
    }
    Ok(series)
}

/// Correlation time from a log-linear fit of `C(t) ≈ A e^{−t/τ_c}` over
/// `t ∈ [from, to]`; points below `floor` are dropped as sampling noise.
pub fn fit_correlation_time(series: &MetricSeries, from: u64, to: u64, floor: f64) -> Option<f64> {
    let (t, c) = series.window(from, to);
    let (t, c): (Vec<f64>, Vec<f64>) = t.into_iter().zip(c).filter(|(_, c)| *c > floor).unzip();
    let fit = crate::numerics::fit::log_linear_fit(&t, &c)?;
    (fit.slope < 0.0).then(|| -1.0 / fit.slope)
}
