use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probabilities sum to {0}, expected exactly 1")]
    NonUnitMass(Rational),
    #[error("negative outcome {0}")]
    NegativeOutcome(Rational),
    #[error("non-positive probability {0}")]
    NonPositiveProbability(Rational),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid weighting function: {0}")]
    InvalidWeighting(String),
    #[error("operation not supported for the {0} weighting family")]
    UnsupportedFamily(String),
    #[error("utility is decreasing between outcomes {lo} and {hi}")]
    NonMonotoneUtility { lo: Rational, hi: Rational },
    #[error("outcome ranking broken at state {state}: {below} > {above}")]
    RankViolation {
        state: usize,
        below: Rational,
        above: Rational,
    },
    #[error("first block at state {first} must strictly precede second block at state {second}")]
    PrecedenceViolation { first: usize, second: usize },
    #[error("bad gap specification: {0}")]
    BadGapSpec(String),
    #[error("supplement does not produce an order-{order} dual improvement")]
    DominanceCheckFailed { order: u32 },
    #[error("2*epsilon equals the loss; the first-order condition case split is undefined")]
    CaseBoundary,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
