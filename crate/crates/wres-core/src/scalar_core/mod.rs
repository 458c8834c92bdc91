//! Exact arithmetic: Gaussian rationals, univariate polynomials and rational
//! functions in `xin`, and commuting-symbol polynomials.

mod expr;
mod gauss;
mod matrix;
mod poly;
mod ratfunc;
mod text;

pub use expr::{Mono, ScalarExpr, Sym};
pub use gauss::GaussRational;
pub use matrix::{Ring, SparseMat};
pub use poly::Poly;
pub use ratfunc::{PartialFractions, RatFuncXi};
pub use text::{parse_gauss, parse_ratfunc, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero polynomial")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole not in Q(i): irreducible factor {0}")]
    PoleNotInQi(String),
}
