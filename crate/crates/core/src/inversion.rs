//! Series reversion.
//!
//! [`compositional_inverse`] solves `f(b(x)) = x` one coefficient at a time.
//! Coefficient `n` of `f(b(x))` depends on `b_n` only through the linear
//! term `a_1 b_n`, so with `b_n` provisionally set to zero the remaining part
//! of that coefficient is a known constant and `b_n` follows from a single
//! division. [`lagrange_inverse_oracle`] reaches the same coefficients by
//! the Lagrange inversion formula and exists to cross-check the first route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::TruncatedSeries;

/// The inverse series together with the residual terms `R_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseWitness {
    pub inverse: TruncatedSeries,
    /// `R_n = b_n + a_n / a_1^(n+1)` for `n = 2..=order`; index 0 holds `R_2`.
    pub residuals: Vec<Rational>,
}

impl InverseWitness {
    /// `R_n`, if `2 <= n <= order`.
    pub fn residual(&self, n: usize) -> Option<&Rational> {
        n.checked_sub(2).and_then(|i| self.residuals.get(i))
    }
}

fn check_invertible(f: &TruncatedSeries) -> Result<Rational> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotInvertible("nonzero constant term".into()));
    }
    if f.order() < 1 {
        return Err(Error::NotInvertible(
            "order 0 does not determine the linear coefficient".into(),
        ));
    }
    if f.coeff(1).is_zero() {
        return Err(Error::NotInvertible("zero linear coefficient".into()));
    }
    Ok(f.coeff(1).clone())
}

pub fn compositional_inverse(f: &TruncatedSeries) -> Result<InverseWitness> {
    let a1 = check_invertible(f)?;
    let order = f.order();
    let inv_a1 = a1.recip().expect("checked nonzero");

    let mut b = vec![Rational::zero(); order + 1];
    b[1] = inv_a1.clone();
    for n in 2..=order {
        let partial = TruncatedSeries::new(b[..=n].to_vec())?;
        let composed = f.truncate(n).compose(&partial)?;
        // target coefficient is 0 for n >= 2
        b[n] = -(composed.coeff(n)) * &inv_a1;
    }
    let inverse = TruncatedSeries::new(b)?;

    let residuals = (2..=order)
        .map(|n| inverse.coeff(n) + f.coeff(n) / a1.pow(n as i32 + 1))
        .collect();
    Ok(InverseWitness { inverse, residuals })
}

/// `b_n = (1/n) [x^(n-1)] (x / f(x))^n`.
pub fn lagrange_inverse_oracle(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let a1 = check_invertible(f)?;
    let order = f.order();
    // f(x)/x = a1 * u(x) with u(0) = 1
    let inv_a1 = a1.recip().expect("checked nonzero");
    let u = TruncatedSeries::new(f.coefficients()[1..].iter().map(|c| c * &inv_a1).collect())?;

    let mut b = vec![Rational::zero(); order + 1];
    for (n, slot) in b.iter_mut().enumerate().skip(1) {
        let n_r = Rational::from(n as i64);
        let u_pow = u.pow_binomial(&-&n_r)?;
        *slot = u_pow.coeff(n - 1) * inv_a1.pow(n as i32) / n_r;
    }
    TruncatedSeries::new(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ints(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_integers(c).unwrap()
    }

    #[test]
    fn identity_is_self_inverse() {
        let x = TruncatedSeries::identity(4);
        assert_eq!(compositional_inverse(&x).unwrap().inverse, x);
        assert_eq!(lagrange_inverse_oracle(&x).unwrap(), x);
    }

    #[test]
    fn catalan_inverse() {
        let f = ints(&[0, 1, 1, 0, 0, 0]);
        let expected = ints(&[0, 1, -1, 2, -5, 14]);
        let w = compositional_inverse(&f).unwrap();
        assert_eq!(w.inverse, expected);
        assert_eq!(f.compose(&w.inverse).unwrap(), TruncatedSeries::identity(5));
        assert_eq!(lagrange_inverse_oracle(&f).unwrap(), expected);
    }

    #[test]
    fn x_minus_x_squared() {
        let f = ints(&[0, 1, -1, 0, 0]);
        let expected = ints(&[0, 1, 1, 2, 5]);
        assert_eq!(lagrange_inverse_oracle(&f).unwrap(), expected);
        assert_eq!(f.compose(&expected).unwrap(), TruncatedSeries::identity(4));
    }

    #[test]
    fn linear_coefficient_is_reciprocal() {
        let f = ints(&[0, 2]);
        let w = compositional_inverse(&f).unwrap();
        assert_eq!(w.inverse.coeff(1), &rat(1, 2));
        assert!(w.residuals.is_empty());
    }

    #[test]
    fn residuals_with_unit_slope() {
        // f = x + x^2: b_2 = -1, a_2 = 1, so R_2 = 0; b_3 = 2, a_3 = 0, R_3 = 2
        let w = compositional_inverse(&ints(&[0, 1, 1, 0])).unwrap();
        assert_eq!(w.residual(2), Some(&rat(0, 1)));
        assert_eq!(w.residual(3), Some(&rat(2, 1)));
        assert_eq!(w.residual(4), None);
    }

    #[test]
    fn rejects_non_invertible() {
        for f in [ints(&[0, 0, 1]), ints(&[1, 1, 0]), ints(&[0])] {
            assert!(matches!(
                compositional_inverse(&f),
                Err(Error::NotInvertible(_))
            ));
            assert!(matches!(
                lagrange_inverse_oracle(&f),
                Err(Error::NotInvertible(_))
            ));
        }
    }

    #[test]
    fn witness_json() {
        let w = compositional_inverse(&ints(&[0, 1, 1])).unwrap();
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["inverse"]["order"], 2);
        assert_eq!(v["residuals"][0]["num"], "0");
    }
}
