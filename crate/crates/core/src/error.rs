use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    #[error("{method} did not converge within {iterations} iterations")]
    Convergence {
        method: &'static str,
        iterations: usize,
        /// Objective values recorded along the way.
        trace: Vec<f64>,
    },

    #[error("every reference abscissa is too close to a zero of P_{degree}")]
    DegenerateReference { degree: usize },

    #[error("degree-{degree} fit leaves held-out residual {residual:e}")]
    DegreeViolation { degree: usize, residual: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
