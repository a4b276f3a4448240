use thiserror::Error;

/// Errors raised by the numerical routines and the command line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("difference order m = {0} outside 1..=20")]
    OrderOutOfRange(usize),

    #[error("quadrature tolerance not met: value {value}, error estimate {error:e}, requested {tol:e}")]
    Quadrature { value: f64, error: f64, tol: f64 },

    #[error("epsilon extrapolation diverging: last increment {last:e}, previous {previous:e}")]
    Extrapolation { last: f64, previous: f64 },

    #[error("lattice sum truncation failed: tail bound {bound:e} above {tol:e} at S = {terms}")]
    Truncation { bound: f64, tol: f64, terms: i64 },

    #[error("field does not provide analytic even derivatives needed at alpha = {0}")]
    MissingDerivatives(f64),

    #[error("invalid stiffness matrix: {}", .0.join("; "))]
    InvalidStiffness(Vec<String>),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
