use thiserror::Error;

/// Failures reported by the library.
///
/// Input problems (wrong shapes, non-skew data, dependent bases) and numerical
/// breakdowns are separate variants so front ends can map them to different
/// exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric (residual {residual:e} exceeds tolerance {tol:e})")]
    NotSkew { residual: f64, tol: f64 },

    #[error("matrix must be square with dimension at least {min}, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("could not build an orthonormal adapted frame: {0}")]
    DegenerateFrame(&'static str),

    #[error("basis has rank {rank} but {len} elements were supplied")]
    DependentBasis { rank: usize, len: usize },

    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("coordinate map is singular")]
    SingularPhi,

    #[error("expected {expected} primitive values, found {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("coefficient layout does not match the frame")]
    SizeMismatch,

    #[error("t^2 does not divide the product polynomial")]
    NotDivisible,

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("polynomial is a nonzero constant")]
    ConstantPolynomial,

    #[error("sampled frame was degenerate after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
