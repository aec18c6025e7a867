#![allow(dead_code)]

use arnold_core::{Rational, TruncatedSeries};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=9, any::<bool>())
        .prop_map(|(n, d, neg)| Rational::new(if neg { -n } else { n }, d))
}

pub fn series_of_order(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(rational(), order + 1).prop_map(|c| TruncatedSeries::new(c).unwrap())
}

/// Zero constant term.
pub fn vanishing_series_of_order(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(rational(), order).prop_map(|tail| {
        let mut c = vec![Rational::zero()];
        c.extend(tail);
        TruncatedSeries::new(c).unwrap()
    })
}

/// Zero constant term, nonzero linear term.
pub fn invertible_series(max_order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (1..=max_order).prop_flat_map(|order| {
        (
            nonzero_rational(),
            prop::collection::vec(rational(), order - 1),
        )
            .prop_map(|(a1, tail)| {
                let mut c = vec![Rational::zero(), a1];
                c.extend(tail);
                TruncatedSeries::new(c).unwrap()
            })
    })
}

pub fn with_coefficient(s: &TruncatedSeries, k: usize, value: Rational) -> TruncatedSeries {
    let mut c = s.coefficients().to_vec();
    c[k] = value;
    TruncatedSeries::new(c).unwrap()
}
