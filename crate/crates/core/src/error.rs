use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("invalid {field}: must satisfy {constraint} (got {value})")]
    Domain {
        field: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// A computed quantity left its admissible range beyond rounding tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("threshold {threshold} exceeds the curve maximum {maximum}")]
    UnreachableThreshold { threshold: f64, maximum: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("quadrature did not converge (relative error estimate {estimate:e})")]
    Quadrature { estimate: f64 },
}

impl Error {
    pub(crate) fn domain(field: &'static str, constraint: &'static str, value: f64) -> Self {
        Error::Domain {
            field,
            constraint,
            value,
        }
    }
}
