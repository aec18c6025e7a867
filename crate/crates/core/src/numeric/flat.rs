//! The flat function `theta(x) = exp(-1/|x|)` and quantities derived from it
//! in log space.

use crate::error::{Error, Result};

/// `exp(-1/|x|)` for `x != 0`, and `0` at the origin. Underflows to zero for
/// `|x|` below roughly `1/745`.
pub fn theta(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (-1.0 / x.abs()).exp()
    }
}

/// `ln theta(x) = -1/|x|`; `-inf` at the origin. Finite wherever `theta`
/// underflows.
pub fn log_theta(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        -1.0 / x.abs()
    }
}

/// `ln theta(u) - ln theta(u + h)` for `u` and `u + h` of the same sign,
/// written as `-h / (|u| |u + h|) * sign(u)` so the increment `h` is never
/// recovered by subtracting nearly equal numbers.
pub fn log_theta_gap(u: f64, h: f64) -> f64 {
    let v = u + h;
    if u == 0.0 || v == 0.0 || u.signum() != v.signum() {
        return log_theta(u) - log_theta(v);
    }
    -h * u.signum() / (u.abs() * v.abs())
}

/// `theta(t) / theta(t + t^2)`, formed as a difference of logs so it never
/// underflows. Equals `exp(-1/(1+t))` for `t > 0`; the right-hand limit at
/// 0 is `1/e`. For `-1 < t < 0` the same quotient is `exp(1/(1+t))`.
pub fn counterexample_ratio(t: f64) -> f64 {
    log_theta_gap(t, t * t).exp()
}

/// `theta(x) / x^n` for each `x`, as `exp(-1/x - n ln x)`.
///
/// For fixed `n` these values go to zero as `x -> 0+`, which is what every
/// derivative of `theta` vanishing at the origin looks like numerically.
pub fn flatness_check(n: u32, xs: &[f64]) -> Result<Vec<f64>> {
    if n == 0 || n > 40 {
        return Err(Error::InvalidInput(format!("n = {n} must be in 1..=40")));
    }
    xs.iter()
        .map(|&x| {
            if x > 0.0 && x < 1.0 {
                Ok((log_theta(x) - f64::from(n) * x.ln()).exp())
            } else {
                Err(Error::InvalidInput(format!("x = {x} must lie in (0, 1)")))
            }
        })
        .collect()
}
