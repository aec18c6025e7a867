//! Exact limit of `(f - g) / (g^{-1} - f^{-1})` at the origin.
//!
//! For `f`, `g` tangent to `y = x` at 0, let `N` be the first index where
//! their coefficients differ. The numerator then starts with
//! `(a_N - A_N) x^N`, and the reversion recursion makes the inverses first
//! differ at the same index, so the limit is the quotient of the two leading
//! coefficients. Nothing here assumes that quotient is 1; it is computed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inversion::compositional_inverse;
use crate::rational::Rational;
use crate::series::{TruncatedSeries, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArnoldReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// `a_N - A_N`
    pub numerator_leading: Rational,
    /// `B_N - b_N`
    pub denominator_leading: Rational,
    pub limit: Rational,
    pub f_inverse: TruncatedSeries,
    pub g_inverse: TruncatedSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    Index(usize),
    Indistinguishable(usize),
}

pub fn first_divergence_index(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Divergence> {
    if f.order() != g.order() {
        return Err(Error::InvalidInput(format!(
            "orders differ: {} vs {}",
            f.order(),
            g.order()
        )));
    }
    Ok(match f.sub(g).valuation() {
        Valuation::Index(n) => Divergence::Index(n),
        Valuation::FlatToOrder(order) => Divergence::Indistinguishable(order),
    })
}

fn check_tangent(s: &TruncatedSeries, which: &str) -> Result<()> {
    if s.order() < 1 {
        return Err(Error::ConditionViolated(format!(
            "{which} has order 0, slope unknown"
        )));
    }
    if !s.coeff(0).is_zero() {
        return Err(Error::ConditionViolated(format!(
            "{which}(0) = {}",
            s.coeff(0)
        )));
    }
    if !s.coeff(1).is_one() {
        return Err(Error::ConditionViolated(format!(
            "{which}'(0) = {}",
            s.coeff(1)
        )));
    }
    Ok(())
}

pub fn arnold_ratio(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<ArnoldReport> {
    check_tangent(f, "f")?;
    check_tangent(g, "g")?;
    let n = match first_divergence_index(f, g)? {
        Divergence::Index(n) => n,
        Divergence::Indistinguishable(order) => return Err(Error::IndistinguishableToOrder(order)),
    };
    let order = f.order();
    if order < n + 1 {
        return Err(Error::UnresolvedAtOrder {
            index: n,
            order,
            needed: n + 1,
        });
    }

    let f_inverse = compositional_inverse(f)?.inverse;
    let g_inverse = compositional_inverse(g)?.inverse;
    let numerator_leading = f.coeff(n) - g.coeff(n);
    let denominator = g_inverse.sub(&f_inverse);
    if denominator.valuation() != Valuation::Index(n) {
        return Err(Error::DegenerateDenominator(n));
    }
    let denominator_leading = denominator.coeff(n).clone();
    let limit = &numerator_leading / &denominator_leading;
    Ok(ArnoldReport {
        n,
        numerator_leading,
        denominator_leading,
        limit,
        f_inverse,
        g_inverse,
    })
}
