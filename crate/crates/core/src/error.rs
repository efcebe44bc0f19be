//! Error type shared by every module.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failures reported by the simulation kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Human-readable constraint that failed.
        reason: &'static str,
    },
    /// Matrix dimensions do not match.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Expected dimension.
        expected: usize,
        /// Actual dimension.
        found: usize,
    },
    /// Input to a Hermitian routine is not Hermitian.
    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {asymmetry:e}")]
    NotHermitian {
        /// Largest measured asymmetry.
        asymmetry: f64,
    },
    /// The eigensolver failed to converge.
    #[error("eigendecomposition did not converge")]
    EigenFailure,
    /// A state has an eigenvalue below the positivity tolerance.
    #[error("density matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositive {
        /// Most negative eigenvalue.
        eigenvalue: f64,
    },
    /// Too much probability sits near the top of the truncated basis.
    #[error("truncation too small: tail occupation {leakage:e} exceeds {threshold:e}")]
    Truncation {
        /// Occupation of the top levels.
        leakage: f64,
        /// Allowed occupation.
        threshold: f64,
    },
    /// A classical trajectory escaped to non-finite values.
    #[error("trajectory diverged at step {step}")]
    Divergence {
        /// Kick count at which the divergence was detected.
        step: u64,
    },
    /// Energy is too close to a pole of the picket-fence loop functions.
    #[error("energy {energy} lies {distance:e} from a pole")]
    PoleProximity {
        /// Offending energy.
        energy: f64,
        /// Distance to the nearest pole in units of the spacing.
        distance: f64,
    },
    /// Two series that must be aligned have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch {
        /// First length.
        left: usize,
        /// Second length.
        right: usize,
    },
    /// A numerical recurrence overflowed.
    #[error("numerical overflow in {context}")]
    Overflow {
        /// Where the overflow happened.
        context: &'static str,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
