//! Exact arithmetic over ℚ(√m): scalars, sparse trivariate polynomials,
//! univariate restrictions and real root isolation.

mod poly;
pub mod roots;
mod scalar;
mod unipoly;

use thiserror::Error;

pub use poly::{Exp, FloatPoly, MultiPoly, Var};
pub use roots::{common_roots, real_roots, CommonRoot, RealRoot, RootError};
pub use scalar::{QuadField, Scalar};
pub use unipoly::UniPoly;

pub(crate) use scalar::fmt_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("remainder is nonzero")]
    NotDivisible,
    #[error("malformed divisor: {0}")]
    MalformedDivisor(String),
}
