//! Truncated formal power series over exact rationals.
//!
//! A series of order `n` knows the coefficients of `x^0 ..= x^n` exactly and
//! nothing beyond. Every binary operation returns a series whose order is the
//! minimum of its operands' orders, so no coefficient is ever reported past
//! the point where it is actually determined.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TruncatedSeries {
    order: usize,
    coefficients: Vec<Rational>,
}

/// Index of the first nonzero coefficient, or a marker that the series
/// vanishes through its whole known range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Index(usize),
    FlatToOrder(usize),
}

impl Valuation {
    pub fn index(self) -> Option<usize> {
        match self {
            Valuation::Index(k) => Some(k),
            Valuation::FlatToOrder(_) => None,
        }
    }
}

impl TruncatedSeries {
    /// Series from coefficients `c_0, c_1, ...`; order is `len - 1`.
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(TruncatedSeries {
            order: coefficients.len() - 1,
            coefficients,
        })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, d)| Rational::new(n, d)).collect())
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coefficients: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = Rational::one();
        s
    }

    /// The series `x`, truncated at `order` (at order 0 it is the zero series).
    pub fn identity(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c * x^exponent`, zero if `exponent > order`.
    pub fn monomial(c: Rational, exponent: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exponent <= order {
            s.coefficients[exponent] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Coefficient of `x^k`. Panics if `k > order`.
    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coefficients[k]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coefficients[0]
    }

    /// Same series known only through `order` (which must not exceed the
    /// current order).
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot extend a truncated series");
        TruncatedSeries {
            order,
            coefficients: self.coefficients[..=order].to_vec(),
        }
    }

    /// Equality on the common known range `0..=min(orders)`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order.min(other.order);
        self.coefficients[..=n] == other.coefficients[..=n]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Rational::is_zero)
    }

    pub fn valuation(&self) -> Valuation {
        self.coefficients
            .iter()
            .position(|c| !c.is_zero())
            .map_or(Valuation::FlatToOrder(self.order), Valuation::Index)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coefficients = (0..=order)
            .map(|k| &self.coefficients[k] + &other.coefficients[k])
            .collect();
        TruncatedSeries {
            order,
            coefficients,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coefficients = (0..=order)
            .map(|k| &self.coefficients[k] - &other.coefficients[k])
            .collect();
        TruncatedSeries {
            order,
            coefficients,
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            order: self.order,
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        TruncatedSeries {
            order: self.order,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coefficients[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        TruncatedSeries {
            order,
            coefficients: out,
        }
    }

    /// `outer(inner(x))` by Horner evaluation in the series ring.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.constant_term().is_zero() {
            return Err(Error::CompositionDomain);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coefficients[..=order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coefficients[0] += c;
        }
        Ok(acc)
    }

    /// `self / den` by forward substitution.
    pub fn divide(&self, den: &Self) -> Result<Self> {
        let d0 = den.constant_term().recip().ok_or(Error::DivisionDomain)?;
        let order = self.order.min(den.order);
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coefficients[n].clone();
            for k in 1..=n {
                if !den.coefficients[k].is_zero() {
                    acc -= &(&den.coefficients[k] * &q[n - k]);
                }
            }
            q.push(acc * &d0);
        }
        Ok(TruncatedSeries {
            order,
            coefficients: q,
        })
    }

    /// Term-wise derivative. The result knows one coefficient fewer, so a
    /// series of order 0 has no determined derivative.
    pub fn derive(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InvalidInput(
                "derivative of an order-0 series is undetermined".into(),
            ));
        }
        let coefficients = (1..=self.order)
            .map(|k| &self.coefficients[k] * Rational::from(k as i64))
            .collect();
        Ok(TruncatedSeries {
            order: self.order - 1,
            coefficients,
        })
    }

    /// Term-wise antiderivative with zero constant term; gains one order.
    pub fn integrate(&self) -> Self {
        let mut coefficients = Vec::with_capacity(self.order + 2);
        coefficients.push(Rational::zero());
        coefficients.extend(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c / Rational::from(k as i64 + 1)),
        );
        TruncatedSeries {
            order: self.order + 1,
            coefficients,
        }
    }

    /// `self^exponent` for a base with constant term 1, as
    /// `sum_k C(exponent, k) (self - 1)^k`.
    pub fn pow_binomial(&self, exponent: &Rational) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::BinomialDomain);
        }
        let order = self.order;
        let mut h = self.clone();
        h.coefficients[0] = Rational::zero();

        let mut acc = Self::one(order);
        let mut power = Self::one(order);
        let mut binom = Rational::one();
        for k in 1..=order {
            // C(a, k) = C(a, k-1) * (a - k + 1) / k
            binom = binom * (exponent - Rational::from(k as i64 - 1)) / Rational::from(k as i64);
            power = power.mul(&h);
            if binom.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&binom));
        }
        Ok(acc)
    }

    /// Evaluates the truncated polynomial at `x` in double precision.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

impl fmt::Display for TruncatedSeries {
    /// Human-readable polynomial, e.g. `x - 1/6*x^3 + O(x^4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = if mag.denom() == &1.into() {
                mag.numer().to_string()
            } else {
                mag.to_string()
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{coeff}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

#[derive(Deserialize)]
struct SeriesRepr {
    order: usize,
    coefficients: Vec<Rational>,
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        if repr.coefficients.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, got {}",
                repr.order,
                repr.order + 1,
                repr.coefficients.len()
            )));
        }
        Ok(TruncatedSeries {
            order: repr.order,
            coefficients: repr.coefficients,
        })
    }
}
