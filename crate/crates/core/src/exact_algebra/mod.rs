//! Exact coefficient arithmetic: symbolic scalars, truncated Laurent series
//! and univariate rational functions.

mod poly;
mod scalar;
mod series;

pub use poly::{Polynomial, RationalFunction};
pub use scalar::{Monomial, Scalar, Symbol};
pub use series::{exp_series, q, TruncatedSeries, Var};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar {0} has no inverse in the coefficient ring")]
    NotInvertible(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("symbol {0} has no value")]
    UnboundSymbol(String),
    #[error("series in different variables: {0} vs {1}")]
    VariableMismatch(&'static str, &'static str),
    #[error("composition needs an inner series without constant term")]
    CompositionValuation,
    #[error("reversion needs a series of valuation exactly 1")]
    ReversionValuation,
    #[error("square root of a series with odd valuation {0}")]
    OddValuation(i64),
    #[error("branch {0} does not square to leading coefficient {1}")]
    BadBranch(String, String),
    #[error("truncation order too short for the requested coefficient")]
    TruncationTooShort,
    #[error("antiderivative would need a logarithm (residue {0})")]
    LogarithmicTerm(String),
    #[error("point {0} is a pole")]
    Pole(String),
}
