//! Exact rationals, minor symbols and sparse Laurent polynomials over them.

mod laurent;
mod rational;
mod symbol;

use thiserror::Error;

pub use laurent::{LaurentMonomial, LaurentPolynomial, TermRecord};
pub use rational::{exact_sqrt, from_int, parse_rational, rational_to_string};
pub use symbol::{IndexSet, MinorSymbol};

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("no value assigned to {0}")]
    MissingSymbol(MinorSymbol),
    #[error("{0} appears in a denominator but evaluates to zero")]
    ZeroDenominator(MinorSymbol),
    #[error("invalid index set {0:?}")]
    InvalidIndexSet(Vec<usize>),
    #[error("invalid minor symbol {0}")]
    InvalidSymbol(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}
