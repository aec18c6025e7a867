//! Exact power-series tools for Arnold's limit
//!
//! ```text
//! lim_{x -> 0} (f(x) - g(x)) / (g^-1(x) - f^-1(x))
//! ```
//!
//! for `f`, `g` tangent to `y = x` at the origin, plus a numeric lab that
//! samples the same picture for a smooth but non-analytic pair.
//!
//! - [`series`]: truncated series over exact rationals.
//! - [`inversion`]: series reversion, with a Lagrange-formula cross-check.
//! - [`elementary`]: sin, cos, tan, arcsin, arctan and expression expansion.
//! - [`expr`]: the expression language (`tan o sin`, `x + x^2`).
//! - [`arnold`]: the exact limit and the first divergence index.
//! - [`numeric`]: double-precision sampling, bisection inverses, log-space
//!   handling of the flat function.

pub mod arnold;
pub mod elementary;
pub mod error;
pub mod expr;
pub mod inversion;
pub mod numeric;
pub mod rational;
pub mod series;

pub use arnold::{arnold_ratio, first_divergence_index, ArnoldReport, Divergence};
pub use error::{Error, Result};
pub use expr::{parse, render, FunctionExpr, ParseError};
pub use inversion::{compositional_inverse, lagrange_inverse_oracle, InverseWitness};
pub use rational::Rational;
pub use series::{TruncatedSeries, Valuation};
