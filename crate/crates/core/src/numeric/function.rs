//! Real functions evaluated in double precision, and bisection inversion.

use std::fmt;

use crate::elementary::PRIMITIVES;
use crate::error::{Error, Result};
use crate::expr::{render, FunctionExpr};
use crate::series::TruncatedSeries;

use super::flat::{log_theta, theta};

/// Points sampled when checking that a function is strictly monotone.
pub const MONOTONE_SAMPLES: usize = 10_000;

/// Relative residual accepted by inverse evaluation.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Bracket { lo, hi })
        } else {
            Err(Error::InvalidInput(format!(
                "bracket [{lo}, {hi}] is empty"
            )))
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone)]
pub enum FnKind {
    /// Truncated polynomial; doubles cached from the exact coefficients.
    Series {
        exact: TruncatedSeries,
        coeffs: Vec<f64>,
    },
    /// A parsed expression over the primitive registry.
    Expr(FunctionExpr),
    Theta,
    /// `q(x) = x + x^2`
    QPoly,
    /// `p(x) = q(x) + theta(x)`
    PFlat,
    Compose(Box<NumericFunction>, Box<NumericFunction>),
    /// Inverse of a function that is strictly monotone on its bracket.
    Inverse(Box<NumericFunction>),
}

/// A function together with the bracket on which it is used (and, for
/// inversion, on which it has been checked to be strictly monotone).
#[derive(Debug, Clone)]
pub struct NumericFunction {
    kind: FnKind,
    bracket: Bracket,
}

fn check_primitives(e: &FunctionExpr) -> Result<()> {
    match e {
        FunctionExpr::Primitive(name) if !PRIMITIVES.contains(&name.as_str()) => {
            Err(Error::UnknownFunction(name.clone()))
        }
        FunctionExpr::Primitive(_) | FunctionExpr::Monomial { .. } => Ok(()),
        FunctionExpr::Scale(_, e) => check_primitives(e),
        FunctionExpr::Sum(l, r) | FunctionExpr::Difference(l, r) | FunctionExpr::Compose(l, r) => {
            check_primitives(l)?;
            check_primitives(r)
        }
    }
}

fn eval_expr_f64(e: &FunctionExpr, x: f64) -> f64 {
    match e {
        FunctionExpr::Primitive(name) => match name.as_str() {
            "sin" => x.sin(),
            "cos" => x.cos(),
            "tan" => x.tan(),
            "arcsin" => x.asin(),
            "arctan" => x.atan(),
            "id" => x,
            _ => f64::NAN,
        },
        FunctionExpr::Monomial {
            coefficient,
            exponent,
        } => coefficient.to_f64() * x.powi(*exponent as i32),
        FunctionExpr::Sum(l, r) => eval_expr_f64(l, x) + eval_expr_f64(r, x),
        FunctionExpr::Difference(l, r) => eval_expr_f64(l, x) - eval_expr_f64(r, x),
        FunctionExpr::Scale(c, e) => c.to_f64() * eval_expr_f64(e, x),
        FunctionExpr::Compose(outer, inner) => eval_expr_f64(outer, eval_expr_f64(inner, x)),
    }
}

impl NumericFunction {
    pub fn series(exact: &TruncatedSeries, bracket: Bracket) -> Self {
        let coeffs = exact.coefficients().iter().map(|c| c.to_f64()).collect();
        NumericFunction {
            kind: FnKind::Series {
                exact: exact.clone(),
                coeffs,
            },
            bracket,
        }
    }

    pub fn expr(e: &FunctionExpr, bracket: Bracket) -> Result<Self> {
        check_primitives(e)?;
        Ok(NumericFunction {
            kind: FnKind::Expr(e.clone()),
            bracket,
        })
    }

    pub fn identity(bracket: Bracket) -> Self {
        NumericFunction {
            kind: FnKind::Expr(FunctionExpr::x()),
            bracket,
        }
    }

    pub fn theta(bracket: Bracket) -> Self {
        NumericFunction {
            kind: FnKind::Theta,
            bracket,
        }
    }

    /// `q(x) = x + x^2`, checked strictly monotone on `bracket`.
    pub fn q_poly(bracket: Bracket) -> Result<Self> {
        let f = NumericFunction {
            kind: FnKind::QPoly,
            bracket,
        };
        f.validate_monotone()?;
        Ok(f)
    }

    /// `p(x) = x + x^2 + theta(x)`, checked strictly monotone on `bracket`.
    pub fn p_flat(bracket: Bracket) -> Result<Self> {
        let f = NumericFunction {
            kind: FnKind::PFlat,
            bracket,
        };
        f.validate_monotone()?;
        Ok(f)
    }

    /// `outer(inner(x))` on the inner function's bracket.
    pub fn compose(outer: NumericFunction, inner: NumericFunction) -> Self {
        let bracket = inner.bracket;
        NumericFunction {
            kind: FnKind::Compose(Box::new(outer), Box::new(inner)),
            bracket,
        }
    }

    /// Inverse by bisection; its bracket is the image of `f`'s bracket.
    pub fn inverse(f: NumericFunction) -> Result<Self> {
        f.validate_monotone()?;
        let a = f.eval(f.bracket.lo)?;
        let b = f.eval(f.bracket.hi)?;
        let bracket = Bracket::new(a.min(b), a.max(b))?;
        Ok(NumericFunction {
            kind: FnKind::Inverse(Box::new(f)),
            bracket,
        })
    }

    pub fn kind(&self) -> &FnKind {
        &self.kind
    }

    pub fn bracket(&self) -> Bracket {
        self.bracket
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match &self.kind {
            FnKind::Series { coeffs, .. } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            FnKind::Expr(e) => eval_expr_f64(e, x),
            FnKind::Theta => theta(x),
            FnKind::QPoly => x + x * x,
            FnKind::PFlat => x + x * x + theta(x),
            FnKind::Compose(outer, inner) => outer.eval(inner.eval(x)?)?,
            FnKind::Inverse(f) => numeric_inverse(f, x, f.bracket, DEFAULT_TOL)?,
        })
    }

    /// Log of the flat part of the function at `x`, for descriptors that
    /// have one: `theta` itself, and `p - q` for `p`.
    pub fn flat_log(&self, x: f64) -> Option<f64> {
        match self.kind {
            FnKind::Theta | FnKind::PFlat => Some(log_theta(x)),
            _ => None,
        }
    }

    /// Samples [`MONOTONE_SAMPLES`] evenly spaced points across the bracket
    /// and requires the values to be strictly increasing or strictly
    /// decreasing throughout.
    pub fn validate_monotone(&self) -> Result<()> {
        let Bracket { lo, hi } = self.bracket;
        let n = MONOTONE_SAMPLES;
        let step = (hi - lo) / n as f64;
        let mut prev = self.eval(lo)?;
        let mut direction = 0.0f64;
        for i in 1..=n {
            let x = if i == n { hi } else { lo + step * i as f64 };
            let v = self.eval(x)?;
            let d = v - prev;
            if d.is_nan() || d == 0.0 || (direction != 0.0 && d.signum() != direction) {
                return Err(Error::NotMonotone { at: x });
            }
            direction = d.signum();
            prev = v;
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            FnKind::Series { exact, .. } => format!("series({exact})"),
            FnKind::Expr(e) => render(e),
            FnKind::Theta => "theta".into(),
            FnKind::QPoly => "q(x) = x + x^2".into(),
            FnKind::PFlat => "p(x) = x + x^2 + theta(x)".into(),
            FnKind::Compose(o, i) => format!("({}) o ({})", o.describe(), i.describe()),
            FnKind::Inverse(f) => format!("inverse({})", f.describe()),
        }
    }
}

/// Solves `f(x) = y` on `bracket` by bisection down to adjacent doubles.
///
/// `f` must be strictly monotone on the bracket (either direction). A
/// midpoint value that falls outside the endpoint values is reported as
/// [`Error::NotMonotone`].
pub fn numeric_inverse(f: &NumericFunction, y: f64, bracket: Bracket, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let (mut f_lo, mut f_hi) = (f.eval(lo)?, f.eval(hi)?);
    let (min, max) = (f_lo.min(f_hi), f_lo.max(f_hi));
    if !(min <= y && y <= max) {
        return Err(Error::BracketInvalid { y, lo, hi });
    }
    if f_lo == f_hi {
        return Err(Error::NotMonotone { at: lo });
    }
    let increasing = f_hi > f_lo;
    if y == f_lo {
        return Ok(lo);
    }
    if y == f_hi {
        return Ok(hi);
    }

    loop {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f.eval(mid)?;
        if !(f_lo.min(f_hi) <= f_mid && f_mid <= f_lo.max(f_hi)) {
            return Err(Error::NotMonotone { at: mid });
        }
        if f_mid == y {
            return Ok(mid);
        }
        if (f_mid < y) == increasing {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    let (x, residual) = if (f_lo - y).abs() <= (f_hi - y).abs() {
        (lo, (f_lo - y).abs())
    } else {
        (hi, (f_hi - y).abs())
    };
    if residual > tol * y.abs().max(1.0) {
        return Err(Error::ToleranceNotMet { residual });
    }
    Ok(x)
}
