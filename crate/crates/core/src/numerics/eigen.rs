use alloc::vec::Vec;

use super::ComplexMatrix;
use crate::{Error, Result};
use faer::{Mat, Side};

/// Largest accepted `|A_ij − conj(A_ji)|` for Hermitian routines.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let scaled = ComplexMatrix::from_fn(n, |i, k| v[(i, k)] * self.eigenvalues[k]);
        scaled.matmul_adjoint(v)
    }
}

fn check_hermitian(a: &ComplexMatrix, tolerance: f64) -> Result<()> {
    let asymmetry = a.hermiticity_defect();
    if asymmetry > tolerance || !a.is_finite() {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigensystem(a: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(a, HERMITIAN_TOLERANCE)?;
    let n = a.dim();
    let evd = a
        .view()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re));
    let eigenvalues = order.iter().map(|&k| s[k].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| u[(i, order[k])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Accepts asymmetry up to `tolerance`; only the lower triangle is read.
pub fn hermitian_eigenvalues(a: &ComplexMatrix, tolerance: f64) -> Result<Vec<f64>> {
    check_hermitian(a, tolerance)?;
    let mut values: Vec<f64> = a
        .view()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigensystem of the real symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal.
///
/// Returns ascending eigenvalues and the row-major orthogonal eigenvector
/// matrix (eigenvector `k` is column `k`).
pub fn symmetric_tridiagonal_eigensystem(
    diag: &[f64],
    off: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: off.len(),
        });
    }
    let t = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i == j + 1 {
            off[j]
        } else if j == i + 1 {
            off[i]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let values = order.iter().map(|&k| s[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for i in 0..n {
        for &k in &order {
            vectors.push(u[(i, k)]);
        }
    }
    Ok((values, vectors))
}
