use thiserror::Error;

use crate::expr::ParseError;

/// Errors raised by the exact series engine and the numeric lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("composition requires an inner series with zero constant term")]
    CompositionDomain,

    #[error("division requires a divisor with nonzero constant term")]
    DivisionDomain,

    #[error("binomial power requires a base with constant term exactly 1")]
    BinomialDomain,

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("f(0) = g(0) = 0 and f'(0) = g'(0) = 1 must hold exactly: {0}")]
    ConditionViolated(String),

    #[error("f and g coincide up to order {0}")]
    IndistinguishableToOrder(usize),

    #[error("first divergence at index {index} needs order >= {needed}, got {order}")]
    UnresolvedAtOrder {
        index: usize,
        order: usize,
        needed: usize,
    },

    #[error("inverse difference has no resolved leading coefficient at index {0}")]
    DegenerateDenominator(usize),

    #[error("target {y} is not enclosed by [{lo}, {hi}]")]
    BracketInvalid { y: f64, lo: f64, hi: f64 },

    #[error("function is not strictly monotone near {at}")]
    NotMonotone { at: f64 },

    #[error("bisection stopped with residual {residual} above tolerance")]
    ToleranceNotMet { residual: f64 },

    #[error("sample at x = {0} is outside the nested-graph configuration")]
    ConfigurationViolated(f64),

    #[error("ratio is indeterminate (0/0) at x = {0}")]
    Indeterminate(f64),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for errors that stem from malformed user text rather than math.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
