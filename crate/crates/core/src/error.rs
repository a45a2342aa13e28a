use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {what} is {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("prime {p} is outside coefficient coverage; largest usable x is {max_x}")]
    Coverage { p: u64, max_x: u64 },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("Deligne bound violated at p = {p}: |lambda(p)| = {value} > 2")]
    DeligneBound { p: u64, value: f64 },

    #[error("coefficient table has no entry for prime {p} below its coverage bound {coverage}")]
    Gap { p: u64, coverage: u64 },

    #[error("insufficient data: need at least {needed} usable points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("zeta has a pole at s = 1")]
    Pole,

    #[error("quadrature did not converge within {nodes} nodes (estimate {estimate}, error estimate {error})")]
    Quadrature {
        nodes: usize,
        estimate: f64,
        error: f64,
    },

    #[error("requested accuracy {requested} unreachable; error bound is {bound}")]
    Accuracy { requested: f64, bound: f64 },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
