use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into precondition violations (bad input) and numerical
/// failures (the computation ran but could not meet its contract); the CLI
/// maps the two groups to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("velocity ({x}, {y}) is not a point of the lattice with step {h}")]
    OffLattice { x: f64, y: f64, h: f64 },

    #[error("invalid collision kernel: {0}")]
    InvalidKernel(String),

    #[error("singular angular kernel (|theta|^-{gamma}) is not supported; the lattice operator needs a C^2 integrand")]
    SingularKernel { gamma: f64 },

    #[error("quadrature did not self-converge: last change {change:e} exceeds tolerance {tolerance:e} after {levels} levels")]
    QuadratureNotConverged {
        change: f64,
        tolerance: f64,
        levels: usize,
    },

    #[error("positivity lost at step {step}: f = {value:e} (max f = {max:e}); reduce dt")]
    PositivityLoss { step: usize, value: f64, max: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNotConverged { .. } | Error::PositivityLoss { .. }
        )
    }

    /// True for precondition violations.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::NotOneModFour(_)
                | Error::InvalidArgument(_)
                | Error::OffLattice { .. }
                | Error::InvalidKernel(_)
                | Error::SingularKernel { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
