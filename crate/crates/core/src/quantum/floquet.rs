use alloc::vec::Vec;

use num_complex::Complex64;

use super::spec::FloquetSpec;
use crate::numerics::{displacement_matrix, displacement_propagator, ComplexMatrix, ExpPropagator};
use crate::Result;

/// Displacement entries below this modulus are treated as outside the band.
const BAND_CUTOFF: f64 = 1e-17;

/// One-period Floquet operator `U = diag(e^{−i(ω0 n + ħn²)}) · D(i g0/√ħ)`,
/// kept in factored form for fast conjugation of density matrices.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    spec: FloquetSpec,
    phases: Vec<Complex64>,
    displacement: ComplexMatrix,
    band: usize,
}

impl FloquetOperator {
    /// Builds the displacement factor and the twist phases.
    pub fn new(spec: &FloquetSpec) -> Result<Self> {
        let displacement = displacement_matrix(spec.kick_amplitude(), spec.n_max)?;
        let band = displacement.bandwidth(BAND_CUTOFF);
        Ok(Self {
            spec: *spec,
            phases: spec.twist_phases(),
            displacement,
            band,
        })
    }

    /// Parameters.
    pub fn spec(&self) -> &FloquetSpec {
        &self.spec
    }

    /// Truncation dimension.
    pub fn dim(&self) -> usize {
        self.spec.n_max
    }

    /// Twist phases.
    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// Displacement factor.
    pub fn displacement(&self) -> &ComplexMatrix {
        &self.displacement
    }

    /// Effective half-bandwidth of the displacement factor.
    pub fn band(&self) -> usize {
        self.band
    }

    /// Dense matrix `U`.
    pub fn matrix(&self) -> ComplexMatrix {
        let d = &self.displacement;
        ComplexMatrix::from_fn(self.dim(), |i, j| self.phases[i] * d[(i, j)])
    }

    /// `D ρ D†` without the twist phases.
    pub fn kick_conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        self.displacement.conjugate_banded(self.band, rho)
    }
}

/// Dense one-period Floquet operator.
pub fn build_floquet(spec: &FloquetSpec) -> Result<ComplexMatrix> {
    Ok(FloquetOperator::new(spec)?.matrix())
}

/// Floquet operator acting on state vectors without forming any matrix.
#[derive(Debug, Clone)]
pub struct FloquetPropagator {
    spec: FloquetSpec,
    phases: Vec<Complex64>,
    kick: ExpPropagator,
}

impl FloquetPropagator {
    /// Prepares the Chebyshev kick and the twist phases.
    pub fn new(spec: &FloquetSpec) -> Result<Self> {
        let kick = displacement_propagator(spec.kick_amplitude(), spec.n_max)?;
        Ok(Self {
            spec: *spec,
            phases: spec.twist_phases(),
            kick,
        })
    }

    /// Parameters.
    pub fn spec(&self) -> &FloquetSpec {
        &self.spec
    }

    /// Truncation dimension.
    pub fn dim(&self) -> usize {
        self.spec.n_max
    }

    /// `ψ ← e^{−iξ n̂} U ψ`.
    pub fn apply(&self, psi: &mut [Complex64], xi: f64) {
        self.kick.apply(psi);
        if xi == 0.0 {
            for (x, p) in psi.iter_mut().zip(&self.phases) {
                *x *= p;
            }
        } else {
            for (n, (x, p)) in psi.iter_mut().zip(&self.phases).enumerate() {
                *x *= p * Complex64::cis(-xi * n as f64);
            }
        }
    }
}
