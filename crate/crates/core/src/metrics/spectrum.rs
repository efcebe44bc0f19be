use alloc::vec::Vec;

use crate::{Error, Result};

/// Normalized weights `W_0, …, W_M` of the θ-harmonics of a phase-space
/// distribution, produced identically by the classical and quantum pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    weights: Vec<f64>,
}

impl HarmonicSpectrum {
    /// Normalizes non-negative raw weights to unit sum.
    pub fn from_raw(mut raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::param("weights", "must be non-empty"));
        }
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("weights", "must be finite and non-negative"));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("weights", "must have positive sum"));
        }
        for w in &mut raw {
            *w /= total;
        }
        Ok(Self { weights: raw })
    }

    /// Spectrum concentrated on the isotropic harmonic.
    pub fn isotropic() -> Self {
        Self {
            weights: alloc::vec![1.0],
        }
    }

    /// Weights `W_0..W_M`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest resolved harmonic index `M`.
    pub fn m_max(&self) -> usize {
        self.weights.len() - 1
    }

    /// Weight of harmonic `m` (zero beyond `M`).
    pub fn weight(&self, m: usize) -> f64 {
        self.weights.get(m).copied().unwrap_or(0.0)
    }
}
