use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian: |A - A^dagger| = {deviation:e} (scale {scale:e})")]
    NotHermitian { deviation: f64, scale: f64 },

    #[error("operator is not unitary: max |U^dagger U - I| = {0:e}")]
    NotUnitary(f64),

    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "reference propagator did not converge after {steps} midpoint steps \
         (last two refinement differences {previous:e}, {last:e})"
    )]
    NoConvergence { steps: usize, previous: f64, last: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
