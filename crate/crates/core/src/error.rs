use thiserror::Error;

use crate::dsl::{EvalError, ParseError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("absolute continuity violated at x={x}: reference density is zero where measure density is {value}")]
    AbsoluteContinuity { x: f64, value: f64 },

    #[error("not an information measure: relative density {value} > 1 at x={x}")]
    NotInformationMeasure { x: f64, value: f64 },

    #[error("degenerate measure: {0}")]
    Degenerate(String),

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    NoConvergence { estimate: f64, error_bound: f64 },

    #[error("integrand is not finite at x={x:e} (value {value})")]
    NonFiniteIntegrand { x: f64, value: f64 },

    #[error("translated set [{lo}, {hi}] escapes the group window [{window_lo}, {window_hi}]")]
    WindowOverflow {
        lo: f64,
        hi: f64,
        window_lo: f64,
        window_hi: f64,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("step size too large: entropy decreased for {consecutive} consecutive iterations (step {step})")]
    StepSize { consecutive: usize, step: f64 },

    #[error("invalid measure spec: {0}")]
    Spec(String),

    #[error("unknown claim id: {0}")]
    UnknownClaim(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Error {
    /// True for errors that stem from numerics rather than from bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NonFiniteIntegrand { .. } | Error::StepSize { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
