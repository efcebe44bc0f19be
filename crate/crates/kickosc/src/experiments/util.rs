use kickosc_core::classical::{
    fit_correlation_time, map_jacobian, phase_correlation_series, ClassicalEnsemble,
};
use kickosc_core::metrics::MetricSeries;
use kickosc_core::numerics::fit::{log_linear_fit, LinearFit};
use kickosc_core::numerics::{hermitian_eigenvalues, ComplexMatrix};
use kickosc_core::quantum::{
    averaged_step, occupation_distribution, truncation_check_weights, FloquetOperator,
    FloquetPropagator, FloquetSpec, FockDensityMatrix, PureMixture, HERMITICITY_TOLERANCE,
    TRUNCATION_THRESHOLD,
};
use kickosc_core::{Complex64, Error, Result};

use crate::runner::Recorder;

/// `n` points from `lo` to `hi`, equally spaced in `ln x`.
pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Three-level Richardson extrapolation of central differences at `x`.
pub(crate) fn richardson(f: impl Fn(f64) -> f64, x: f64, second: bool) -> f64 {
    let stencil = |h: f64| {
        if second {
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
        } else {
            (f(x + h) - f(x - h)) / (2.0 * h)
        }
    };
    let h = 0.05 * x;
    let (a, b, c) = (stencil(h), stencil(h / 2.0), stencil(h / 4.0));
    let ab = (4.0 * b - a) / 3.0;
    let bc = (4.0 * c - b) / 3.0;
    (16.0 * bc - ab) / 15.0
}

/// Shortest decimal form, for file and column names.
pub(crate) fn tag(x: f64) -> String {
    format!("{x}")
}

/// Log-linear fit of `y` against `t` over `from ≤ t ≤ to`, skipping non-positive values.
pub(crate) fn growth_fit(t: &[f64], y: &[f64], from: f64, to: f64) -> Option<LinearFit> {
    let (tt, yy): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(t, y)| **t >= from && **t <= to && **y > 0.0)
        .map(|(t, y)| (*t, *y))
        .unzip();
    log_linear_fit(&tt, &yy)
}

/// Phase correlation up to `to` kicks and the correlation time fitted over
/// `[1, to]`, stopping before the first point under three times the `1/n`
/// sampling floor.
pub(crate) fn correlation_time(e: &ClassicalEnsemble, to: u64) -> Result<(MetricSeries, f64)> {
    let corr = phase_correlation_series(e, to, 1.0)?;
    let floor = 3.0 / e.points.len() as f64;
    let last = corr
        .times()
        .iter()
        .zip(corr.values())
        .find(|(t, c)| **t >= 1 && **c <= floor)
        .map_or(to, |(t, _)| t - 1);
    let tau = fit_correlation_time(&corr, 1, last, floor).unwrap_or(f64::NAN);
    Ok((corr, tau))
}

/// Records the largest `|det J − 1|` of the one-kick Jacobian over the first
/// thousand points of an ensemble.
pub(crate) fn area_preservation(e: &ClassicalEnsemble, rec: &mut Recorder) {
    let worst = e
        .points
        .iter()
        .take(1000)
        .map(|&pt| {
            let j = map_jacobian(pt, &e.params);
            (j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs()
        })
        .fold(0.0, f64::max);
    rec.invariant(
        "kick map preserves area",
        worst < 1e-10,
        format!("max |det J - 1| {worst:.3e}"),
    );
}

/// Truncation sizes: powers of two and their 3/2 multiples.
fn next_size(n: usize) -> usize {
    let p = n.next_power_of_two();
    if p == n {
        n + n / 2
    } else if n < p / 4 * 3 {
        p / 4 * 3
    } else {
        p
    }
}

/// Smallest admissible size holding `levels`.
pub(crate) fn size_for(levels: usize) -> usize {
    let mut n = FloquetSpec::MIN_LEVELS;
    while n < levels {
        n = next_size(n);
    }
    n
}

/// Occupation above the highest relevant level.
const NEGLIGIBLE_MASS: f64 = 1e-16;

/// Extra reach in `√n` beyond one classical kick.
const TAIL_MARGIN: f64 = 6.0;

/// Truncation covering one kick of `√n` by `|η| = g0/√ħ` beyond the highest
/// occupied level plus a margin, never below the current size nor above `cap`.
fn target_size(w: &[f64], spec: &FloquetSpec, cap: usize) -> usize {
    let mut tail = 0.0;
    let top = w
        .iter()
        .rposition(|&x| {
            tail += x;
            tail > NEGLIGIBLE_MASS
        })
        .unwrap_or(0);
    let edge = (top as f64).sqrt() + spec.kick_amplitude().norm() + TAIL_MARGIN;
    size_for((edge * edge) as usize + 32)
        .max(spec.n_max)
        .min(cap)
}

/// Fails when the top `n/32` levels hold `1e-8` or more.
fn check_leakage(w: &[f64]) -> Result<f64> {
    let report = truncation_check_weights(w, (w.len() / 32).max(4))?;
    if !report.pass {
        return Err(Error::Truncation {
            leakage: report.leakage,
            threshold: TRUNCATION_THRESHOLD,
        });
    }
    Ok(report.leakage)
}

/// A [`PureMixture`] whose truncation grows on demand up to a cap.
///
/// Before each period the basis is enlarged to cover one kick of `√n` by
/// `|η| = g0/√ħ` from the highest occupied level, plus a margin; after each
/// period the top `n/32` levels must hold less than `1e-8`.
pub(crate) struct GrowingMixture {
    spec: FloquetSpec,
    cap: usize,
    mixture: PureMixture,
    prop: FloquetPropagator,
    largest_leakage: f64,
}

impl GrowingMixture {
    /// Initial isotropic state of mean action `Δ + ħ/2`; `spec.n_max` is the cap.
    pub(crate) fn initial(delta: f64, spec: FloquetSpec, discard: f64) -> Result<(Self, f64)> {
        let (w, _) = kickosc_core::quantum::geometric_occupations(delta, spec.hbar, spec.n_max)?;
        let total: f64 = w.iter().sum();
        let mut mass = 0.0;
        let kept = w
            .iter()
            .take_while(|&&x| {
                let more = mass < total * (1.0 - discard);
                mass += x;
                more
            })
            .count();
        let start = size_for(4 * kept).min(spec.n_max);
        let (mixture, dropped) = PureMixture::initial(delta, &spec.with_levels(start)?, discard)?;
        Ok((Self::from_mixture(spec, mixture)?, dropped))
    }

    /// Wraps an existing mixture; `spec.n_max` is the cap.
    pub(crate) fn from_mixture(spec: FloquetSpec, mixture: PureMixture) -> Result<Self> {
        let cap = spec.n_max;
        let spec = spec.with_levels(mixture.dim())?;
        Ok(Self {
            prop: FloquetPropagator::new(&spec)?,
            spec,
            cap,
            mixture,
            largest_leakage: 0.0,
        })
    }

    pub(crate) fn mixture(&self) -> &PureMixture {
        &self.mixture
    }

    pub(crate) fn dim(&self) -> usize {
        self.spec.n_max
    }

    /// Largest top-level occupation seen after any period.
    pub(crate) fn largest_leakage(&self) -> f64 {
        self.largest_leakage
    }

    fn grow(&mut self) -> Result<()> {
        let target = target_size(&self.mixture.occupation(), &self.spec, self.cap);
        self.pad_to(target)
    }

    /// Enlarges the basis to `dim` levels.
    pub(crate) fn pad_to(&mut self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            self.mixture.pad_to(dim)?;
            self.spec = self.spec.with_levels(dim)?;
            self.prop = FloquetPropagator::new(&self.spec)?;
        }
        Ok(())
    }

    /// One period with angular shift `xi`.
    pub(crate) fn step(&mut self, xi: f64) -> Result<()> {
        self.grow()?;
        self.mixture.step(&self.prop, xi)?;
        let leakage = check_leakage(&self.mixture.occupation())?;
        self.largest_leakage = self.largest_leakage.max(leakage);
        Ok(())
    }
}

/// A noise-averaged density matrix whose truncation grows like
/// [`GrowingMixture`].
pub(crate) struct GrowingDensity {
    spec: FloquetSpec,
    cap: usize,
    rho: FockDensityMatrix,
    op: FloquetOperator,
    sigma: f64,
}

impl GrowingDensity {
    /// `rho` in the basis of its own size; `spec.n_max` is the cap.
    pub(crate) fn new(spec: FloquetSpec, rho: FockDensityMatrix, sigma: f64) -> Result<Self> {
        let cap = spec.n_max;
        let spec = spec.with_levels(rho.dim())?;
        Ok(Self {
            op: FloquetOperator::new(&spec)?,
            spec,
            cap,
            rho,
            sigma,
        })
    }

    pub(crate) fn rho(&self) -> &FockDensityMatrix {
        &self.rho
    }

    /// One averaged period.
    pub(crate) fn step(&mut self) -> Result<()> {
        let target = target_size(&occupation_distribution(&self.rho), &self.spec, self.cap);
        if target != self.spec.n_max {
            let n = self.rho.dim();
            let m = self.rho.matrix();
            let padded = ComplexMatrix::from_fn(target, |i, j| {
                if i < n && j < n {
                    m[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            self.rho = FockDensityMatrix::new(padded)?;
            self.spec = self.spec.with_levels(target)?;
            self.op = FloquetOperator::new(&self.spec)?;
        }
        self.rho = averaged_step(&self.rho, &self.op, self.sigma);
        check_leakage(&occupation_distribution(&self.rho))?;
        Ok(())
    }
}

/// Eigenvalues of the leading block of `ρ` that holds all but `tail` of the
/// trace; the dropped rows carry at most `tail` of the spectrum.
pub(crate) fn support_eigenvalues(rho: &FockDensityMatrix, tail: f64) -> Result<Vec<f64>> {
    let w = occupation_distribution(rho);
    let mut mass = 0.0;
    let keep = w
        .iter()
        .rposition(|&x| {
            mass += x;
            mass > tail
        })
        .map_or(1, |i| i + 1)
        .max(FloquetSpec::MIN_LEVELS.min(w.len()));
    let m = rho.matrix();
    let block = ComplexMatrix::from_fn(keep, |i, j| m[(i, j)]);
    hermitian_eigenvalues(&block, HERMITICITY_TOLERANCE)
}

/// `−Σ λ ln λ` over eigenvalues clamped at zero.
pub(crate) fn entropy_of(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_alternate() {
        let mut n = 16;
        let mut seen = vec![n];
        for _ in 0..6 {
            n = next_size(n);
            seen.push(n);
        }
        assert_eq!(seen, vec![16, 24, 32, 48, 64, 96, 128]);
        assert_eq!(size_for(100), 128);
        assert_eq!(size_for(16), 16);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-2, 1e3, 200);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-2).abs() < 1e-15);
        assert!((g[199] / 1e3 - 1.0).abs() < 1e-13);
    }
}
