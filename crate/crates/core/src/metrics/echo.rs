use num_complex::Complex64;

use crate::numerics::ComplexMatrix;
use crate::quantum::{build_floquet, FloquetSpec, FockDensityMatrix};
use crate::{Error, Result};

/// Floquet operator of `H_0 + εV` with `V = ħn̂`: `U_V = e^{−iεn̂} U`.
pub fn perturbed_floquet(spec: &FloquetSpec, epsilon: f64) -> Result<ComplexMatrix> {
    let u = build_floquet(spec)?;
    Ok(ComplexMatrix::from_fn(spec.n_max, |i, j| {
        Complex64::cis(-epsilon * i as f64) * u[(i, j)]
    }))
}

/// Loschmidt echo operator `f(t) = U†^t U_V^t`.
pub fn echo_operator(spec: &FloquetSpec, epsilon: f64, t: u64) -> Result<ComplexMatrix> {
    let u = build_floquet(spec)?;
    let uv = ComplexMatrix::from_fn(spec.n_max, |i, j| {
        Complex64::cis(-epsilon * i as f64) * u[(i, j)]
    });
    let mut forward = ComplexMatrix::identity(spec.n_max);
    let mut back = ComplexMatrix::identity(spec.n_max);
    for _ in 0..t {
        forward = uv.matmul(&forward);
        back = u.matmul(&back);
    }
    Ok(back.adjoint().matmul(&forward))
}

fn check(rho0: &FockDensityMatrix, f: &ComplexMatrix) -> Result<()> {
    if rho0.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: rho0.dim(),
        });
    }
    Ok(())
}

/// Allegiance `|Tr[f ρ0]|²`.
pub fn allegiance(rho0: &FockDensityMatrix, f: &ComplexMatrix) -> Result<f64> {
    check(rho0, f)?;
    Ok(f.trace_product(rho0.matrix()).norm_sqr())
}

/// Transition fidelity `Tr[f ρ0 f† ρ0] / Tr ρ0²`.
pub fn transition_fidelity(rho0: &FockDensityMatrix, f: &ComplexMatrix) -> Result<f64> {
    check(rho0, f)?;
    let moved = f.matmul(rho0.matrix()).matmul_adjoint(f);
    let p = super::purity(rho0);
    Ok(moved.trace_product(rho0.matrix()).re / p)
}
