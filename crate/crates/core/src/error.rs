use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the closed interval an operation is defined on.
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid kernel shift: {0}")]
    InvalidShift(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("evaluation failed at (r, u, v, gu, gv) = {point:?}: {source}")]
    Eval { source: EvalError, point: [f64; 5] },

    #[error("invalid ladder: {0}")]
    InvalidLadder(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("singular Jacobian at grid size {grid}")]
    SingularJacobian { grid: usize },

    #[error("fixed-point iteration diverged: C1 norm {norm:e} after {iterations} iterations")]
    Divergence { norm: f64, iterations: usize },
}

impl Error {
    pub(crate) fn eval(source: EvalError, point: [f64; 5]) -> Self {
        Error::Eval { source, point }
    }
}

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}
