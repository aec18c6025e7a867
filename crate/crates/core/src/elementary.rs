//! Exact Taylor series of the named primitives and evaluation of parsed
//! expressions into series.

use crate::error::{Error, Result};
use crate::expr::FunctionExpr;
use crate::rational::Rational;
use crate::series::TruncatedSeries;

/// Names understood by [`eval_expr`] and the numeric lab.
pub const PRIMITIVES: [&str; 6] = ["sin", "cos", "tan", "arcsin", "arctan", "id"];

/// Fills odd or even slots with `c_{k+2} = -c_k / ((k+1)(k+2))`.
fn trig_series(order: usize, start: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    if start <= order {
        coeffs[start] = Rational::one();
    }
    let mut k = start;
    while k + 2 <= order {
        let denom = Rational::from(((k + 1) * (k + 2)) as i64);
        coeffs[k + 2] = -(&coeffs[k] / denom);
        k += 2;
    }
    TruncatedSeries::new(coeffs).expect("order + 1 coefficients")
}

pub fn sin_series(order: usize) -> TruncatedSeries {
    trig_series(order, 1)
}

pub fn cos_series(order: usize) -> TruncatedSeries {
    trig_series(order, 0)
}

pub fn tan_series(order: usize) -> TruncatedSeries {
    sin_series(order)
        .divide(&cos_series(order))
        .expect("cos has constant term 1")
}

/// `integrate((1 + sign*x^2)^exponent)`, truncated at `order`.
fn integrated_binomial(order: usize, sign: i64, exponent: Rational) -> TruncatedSeries {
    if order == 0 {
        return TruncatedSeries::zero(0);
    }
    let base = TruncatedSeries::one(order - 1).add(&TruncatedSeries::monomial(
        Rational::from(sign),
        2,
        order - 1,
    ));
    base.pow_binomial(&exponent)
        .expect("base has constant term 1")
        .integrate()
}

pub fn arctan_series(order: usize) -> TruncatedSeries {
    integrated_binomial(order, 1, Rational::from(-1))
}

pub fn arcsin_series(order: usize) -> TruncatedSeries {
    integrated_binomial(order, -1, Rational::new(-1, 2))
}

/// Series of a registry primitive.
pub fn primitive_series(name: &str, order: usize) -> Result<TruncatedSeries> {
    Ok(match name {
        "sin" => sin_series(order),
        "cos" => cos_series(order),
        "tan" => tan_series(order),
        "arcsin" => arcsin_series(order),
        "arctan" => arctan_series(order),
        "id" => TruncatedSeries::identity(order),
        other => return Err(Error::UnknownFunction(other.to_string())),
    })
}

/// Expands an expression to a truncated series at `order`.
pub fn eval_expr(expr: &FunctionExpr, order: usize) -> Result<TruncatedSeries> {
    match expr {
        FunctionExpr::Primitive(name) => primitive_series(name, order),
        FunctionExpr::Monomial {
            coefficient,
            exponent,
        } => Ok(TruncatedSeries::monomial(
            coefficient.clone(),
            *exponent as usize,
            order,
        )),
        FunctionExpr::Sum(l, r) => Ok(eval_expr(l, order)?.add(&eval_expr(r, order)?)),
        FunctionExpr::Difference(l, r) => Ok(eval_expr(l, order)?.sub(&eval_expr(r, order)?)),
        FunctionExpr::Scale(c, e) => Ok(eval_expr(e, order)?.scale(c)),
        FunctionExpr::Compose(outer, inner) => {
            let inner = eval_expr(inner, order)?;
            eval_expr(outer, order)?.compose(&inner)
        }
    }
}
