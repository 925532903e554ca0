use crate::basis::Frame;

/// Errors reported by the library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid angular momentum arguments: {0}")]
    AngularMomentum(String),

    #[error("expected a {expected:?}-frame basis, got {got:?}")]
    FrameMismatch { expected: Frame, got: Frame },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix deviates from Hermitian by {deviation:e} relative to its scale (tolerance {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("magnetic field must be nonnegative, got {0} T")]
    NegativeField(f64),

    #[error("temperature must be nonnegative, got {0} K")]
    NegativeTemperature(f64),

    #[error("density matrix is not positive semidefinite: eigenvalue {0:e}")]
    NotPositiveSemidefinite(f64),

    #[error("density matrix trace deviates from one by {0:e}")]
    NotUnitTrace(f64),

    #[error("source basis is not contained in the target basis")]
    NotSubBasis,

    #[error("requested {requested} levels from a spectrum of dimension {dimension}")]
    NotEnoughLevels { requested: usize, dimension: usize },

    #[error("inconsistent {quantity}: routes differ by {delta:e}")]
    Inconsistent { quantity: &'static str, delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
