use super::channel::{averaged_step, noisy_step, unitary_step, Conjugator};
use super::state::{truncation_check, FockDensityMatrix};
use crate::numerics::RandomStream;
use crate::{Error, Result};

/// Dephasing noise strength and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation of the per-period rotation `ξ`.
    pub sigma: f64,
    /// Seed of the noise streams.
    pub master_seed: u64,
}

impl NoiseSpec {
    /// Validated noise parameters.
    pub fn new(sigma: f64, master_seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::param("sigma", "must be finite and non-negative"));
        }
        Ok(Self { sigma, master_seed })
    }

    /// Noise-free dynamics.
    pub fn none() -> Self {
        Self {
            sigma: 0.0,
            master_seed: 0,
        }
    }

    /// Stream of realization `index`.
    pub fn stream(&self, index: u64) -> RandomStream {
        RandomStream::new(self.master_seed, index)
    }
}

/// How noise enters the evolution.
#[derive(Debug, Clone)]
pub enum EvolutionMode {
    /// One noise history drawn from the given stream.
    PerRealization(RandomStream),
    /// Exact Gaussian average over histories.
    Averaged,
}

/// Truncation monitoring during evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// Number of top levels inspected.
    pub tail: usize,
    /// Inspection period in steps; zero disables the check.
    pub every: u64,
}

impl TruncationPolicy {
    /// Checks the top `n_max/32` levels (at least 4) every 10 steps.
    pub fn for_levels(n_max: usize) -> Self {
        Self {
            tail: (n_max / 32).max(4),
            every: 10,
        }
    }

    /// No monitoring.
    pub fn disabled() -> Self {
        Self { tail: 1, every: 0 }
    }
}

/// Evolves `rho0` for `t` periods, calling `observe(τ, ρ(τ))` for `τ = 0..=t`.
///
/// Noise-free evolution is selected by `noise.sigma == 0` in either mode.
/// The run aborts with [`Error::Truncation`] when the policy's check fails.
pub fn evolve<C, F>(
    rho0: &FockDensityMatrix,
    u: &C,
    t: u64,
    noise: &NoiseSpec,
    mode: EvolutionMode,
    policy: TruncationPolicy,
    mut observe: F,
) -> Result<FockDensityMatrix>
where
    C: Conjugator,
    F: FnMut(u64, &FockDensityMatrix) -> Result<()>,
{
    if rho0.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: rho0.dim(),
        });
    }
    let mut rho = rho0.clone();
    observe(0, &rho)?;
    let mut stream = match mode {
        EvolutionMode::PerRealization(s) => Some(s),
        EvolutionMode::Averaged => None,
    };
    for tau in 1..=t {
        rho = if noise.sigma == 0.0 {
            unitary_step(&rho, u)
        } else if let Some(s) = stream.as_mut() {
            noisy_step(&rho, u, noise.sigma * s.gaussian())
        } else {
            averaged_step(&rho, u, noise.sigma)
        };
        if policy.every > 0 && tau % policy.every == 0 {
            let report = truncation_check(&rho, policy.tail)?;
            if !report.pass {
                return Err(Error::Truncation {
                    leakage: report.leakage,
                    threshold: super::TRUNCATION_THRESHOLD,
                });
            }
        }
        observe(tau, &rho)?;
    }
    Ok(rho)
}
