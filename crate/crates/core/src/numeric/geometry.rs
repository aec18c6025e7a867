//! Segment lengths of the nested-graph picture around the origin.
//!
//! For a pair `f`, `g` and an abscissa `x` the points are
//!
//! ```text
//! A = (x, f(x))            B = (x, g(x))        C = (f^-1(g(x)), g(x))
//! D = (g^-1(x), x)         D' = (x, x)          E = (f^-1(x), x)
//! F = (f^-1(g(x)), x)
//! ```
//!
//! so `|AB| = |f(x) - g(x)|`, `|BC| = |x - f^-1(g(x))|`,
//! `|ED| = |f^-1(x) - g^-1(x)|`, `|DD'| = |x - g^-1(x)|`, and with this
//! placement of `F` directly below `C`, `|FD'| = |BC|`.
//!
//! Every length also carries its natural log. Ratios are always formed from
//! log differences, so lengths that underflow a double still give finite
//! ratios when their logs are known.

use serde::Serialize;

use crate::error::{Error, Result};

use super::flat::{log_theta, log_theta_gap};
use super::function::{numeric_inverse, Bracket, FnKind, NumericFunction, DEFAULT_TOL};

/// Below `ln(f64::MIN_POSITIVE)` a length is reported as `0` in raw form and
/// only its log is meaningful.
const LOG_MIN_NORMAL: f64 = -708.396_418_532_264_1;

/// Lengths within this many ulps of the operands they were computed from are
/// treated as unresolved zeros.
const NOISE_ULPS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// A raw length underflowed; its ratios come from the log channel.
    Logspace,
    /// A ratio is 0/0.
    Indeterminate,
    /// A length is below the resolution of the doubles it was computed from.
    Unresolved,
    ConfigurationViolated,
    BracketInvalid,
    NotMonotone,
    ToleranceNotMet,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Logspace => "logspace",
            Flag::Indeterminate => "indeterminate",
            Flag::Unresolved => "unresolved",
            Flag::ConfigurationViolated => "configuration_violated",
            Flag::BracketInvalid => "bracket_invalid",
            Flag::NotMonotone => "not_monotone",
            Flag::ToleranceNotMet => "tolerance_not_met",
        }
    }

    /// Flags that mean the row carries no usable sample.
    pub fn is_fatal(self) -> bool {
        matches!(
            self,
            Flag::ConfigurationViolated
                | Flag::BracketInvalid
                | Flag::NotMonotone
                | Flag::ToleranceNotMet
        )
    }

    pub(crate) fn from_error(e: &Error) -> Flag {
        match e {
            Error::ConfigurationViolated(_) => Flag::ConfigurationViolated,
            Error::BracketInvalid { .. } => Flag::BracketInvalid,
            Error::NotMonotone { .. } => Flag::NotMonotone,
            _ => Flag::ToleranceNotMet,
        }
    }
}

/// Natural logs of the five lengths; `-inf` for zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLengths {
    pub ab: f64,
    pub bc: f64,
    pub ed: f64,
    pub ddp: f64,
    pub fdp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricSample {
    pub x: f64,
    #[serde(rename = "AB")]
    pub ab: f64,
    #[serde(rename = "BC")]
    pub bc: f64,
    #[serde(rename = "ED")]
    pub ed: f64,
    #[serde(rename = "DDp")]
    pub ddp: f64,
    #[serde(rename = "FDp")]
    pub fdp: f64,
    #[serde(rename = "ratio_AB_BC")]
    pub ratio_ab_bc: f64,
    #[serde(rename = "ratio_BC_ED")]
    pub ratio_bc_ed: f64,
    #[serde(skip)]
    pub ratio_ddp_fdp: f64,
    #[serde(rename = "log_ratio_DDp_FDp")]
    pub log_ratio_ddp_fdp: f64,
    #[serde(skip)]
    pub logs: LogLengths,
    #[serde(serialize_with = "serialize_flags")]
    pub flags: Vec<Flag>,
}

fn serialize_flags<S: serde::Serializer>(flags: &[Flag], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&join_flags(flags))
}

pub(crate) fn join_flags(flags: &[Flag]) -> String {
    flags
        .iter()
        .map(|f| f.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

impl GeometricSample {
    /// `|ED| / |BC|`, the orientation used when decomposing `|ED|`.
    pub fn ratio_ed_bc(&self) -> f64 {
        (self.logs.ed - self.logs.bc).exp()
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// Placeholder row for a sample that could not be evaluated.
    pub(crate) fn failed(x: f64, flag: Flag) -> Self {
        let nan = f64::NAN;
        GeometricSample {
            x,
            ab: nan,
            bc: nan,
            ed: nan,
            ddp: nan,
            fdp: nan,
            ratio_ab_bc: nan,
            ratio_bc_ed: nan,
            ratio_ddp_fdp: nan,
            log_ratio_ddp_fdp: nan,
            logs: LogLengths {
                ab: nan,
                bc: nan,
                ed: nan,
                ddp: nan,
                fdp: nan,
            },
            flags: vec![flag],
        }
    }

    fn from_logs(x: f64, logs: LogLengths, mut flags: Vec<Flag>) -> Self {
        let raw = |l: f64, flags: &mut Vec<Flag>| {
            if l.is_finite() && l < LOG_MIN_NORMAL {
                if !flags.contains(&Flag::Logspace) {
                    flags.push(Flag::Logspace);
                }
                0.0
            } else {
                l.exp()
            }
        };
        let ab = raw(logs.ab, &mut flags);
        let bc = raw(logs.bc, &mut flags);
        let ed = raw(logs.ed, &mut flags);
        let ddp = raw(logs.ddp, &mut flags);
        let fdp = raw(logs.fdp, &mut flags);

        let ratio_ab_bc = log_ratio(logs.ab, logs.bc, &mut flags).exp();
        let ratio_bc_ed = log_ratio(logs.bc, logs.ed, &mut flags).exp();
        let log_ratio_ddp_fdp = log_ratio(logs.ddp, logs.fdp, &mut flags);
        GeometricSample {
            x,
            ab,
            bc,
            ed,
            ddp,
            fdp,
            ratio_ab_bc,
            ratio_bc_ed,
            ratio_ddp_fdp: log_ratio_ddp_fdp.exp(),
            log_ratio_ddp_fdp,
            logs,
            flags,
        }
    }
}

/// `ln(a/b)` from logs; `0/0` is NaN and flagged.
fn log_ratio(log_num: f64, log_den: f64, flags: &mut Vec<Flag>) -> f64 {
    if log_num == f64::NEG_INFINITY && log_den == f64::NEG_INFINITY {
        if !flags.contains(&Flag::Indeterminate) {
            flags.push(Flag::Indeterminate);
        }
        f64::NAN
    } else {
        log_num - log_den
    }
}

/// Which side of the origin the flat counterexample is probed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    /// Bracket on which `p` and `q` are strictly increasing.
    pub fn bracket(self) -> Bracket {
        match self {
            Side::Right => Bracket { lo: 0.0, hi: 0.5 },
            Side::Left => Bracket { lo: -0.25, hi: 0.0 },
        }
    }
}

/// `(f, g) = (p^-1, q^-1)` with `q(x) = x + x^2` and `p = q + theta`,
/// realized by bisection on the side's bracket.
pub fn counterexample_pair(side: Side) -> Result<(NumericFunction, NumericFunction)> {
    let p = NumericFunction::p_flat(side.bracket())?;
    let q = NumericFunction::q_poly(side.bracket())?;
    Ok((NumericFunction::inverse(p)?, NumericFunction::inverse(q)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Direct,
    /// `f = p^-1`, `g = q^-1`: lengths from closed forms in log space.
    FlatPair,
}

/// A validated pair of functions ready for sampling.
#[derive(Debug, Clone)]
pub struct GeometricPair {
    f: NumericFunction,
    g: NumericFunction,
    route: Route,
    tol: f64,
}

fn is_flat_pair(f: &NumericFunction, g: &NumericFunction) -> bool {
    match (f.kind(), g.kind()) {
        (FnKind::Inverse(p), FnKind::Inverse(q)) => {
            matches!(p.kind(), FnKind::PFlat)
                && matches!(q.kind(), FnKind::QPoly)
                && p.bracket() == q.bracket()
        }
        _ => false,
    }
}

impl GeometricPair {
    /// Checks both functions for strict monotonicity on their brackets. The
    /// flat counterexample pair is recognized and sampled in log space.
    pub fn new(f: NumericFunction, g: NumericFunction) -> Result<Self> {
        let route = if is_flat_pair(&f, &g) {
            Route::FlatPair
        } else {
            Route::Direct
        };
        Self::with_route(f, g, route)
    }

    /// Same pair, always evaluated with plain double arithmetic and
    /// bisection. Only meaningful where no length underflows.
    pub fn direct(f: NumericFunction, g: NumericFunction) -> Result<Self> {
        Self::with_route(f, g, Route::Direct)
    }

    fn with_route(f: NumericFunction, g: NumericFunction, route: Route) -> Result<Self> {
        f.validate_monotone()?;
        g.validate_monotone()?;
        Ok(GeometricPair {
            f,
            g,
            route,
            tol: DEFAULT_TOL,
        })
    }

    pub fn f(&self) -> &NumericFunction {
        &self.f
    }

    pub fn g(&self) -> &NumericFunction {
        &self.g
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_log_space(&self) -> bool {
        self.route == Route::FlatPair
    }

    pub fn sample(&self, x: f64) -> Result<GeometricSample> {
        match self.route {
            Route::Direct => self.sample_direct(x),
            Route::FlatPair => self.sample_flat(x),
        }
    }

    fn inv_f(&self, y: f64) -> Result<f64> {
        numeric_inverse(&self.f, y, self.f.bracket(), self.tol)
    }

    fn inv_g(&self, y: f64) -> Result<f64> {
        numeric_inverse(&self.g, y, self.g.bracket(), self.tol)
    }

    fn sample_direct(&self, x: f64) -> Result<GeometricSample> {
        let fx = self.f.eval(x)?;
        let gx = self.g.eval(x)?;
        let scale = x.abs().max(fx.abs()).max(gx.abs());
        let floor = NOISE_ULPS * f64::EPSILON * scale;

        let g_side = gx - x;
        let f_side = fx - gx;
        let nested =
            g_side.abs() > floor && (f_side.abs() <= floor || f_side.signum() == g_side.signum());
        if !nested {
            return Err(Error::ConfigurationViolated(x));
        }

        let c = self.inv_f(gx)?;
        let e = self.inv_f(x)?;
        let d = self.inv_g(x)?;

        let mut flags = Vec::new();
        let resolved = |len: f64| if len <= floor { 0.0 } else { len };
        let ab = resolved(f_side.abs());
        let bc = resolved((x - c).abs());
        let ed = resolved((e - d).abs());
        let ddp = resolved((x - d).abs());
        if f_side != 0.0 && ab == 0.0 {
            flags.push(Flag::Unresolved);
        }
        let logs = LogLengths {
            ab: ab.ln(),
            bc: bc.ln(),
            ed: ed.ln(),
            ddp: ddp.ln(),
            fdp: bc.ln(),
        };
        Ok(GeometricSample::from_logs(x, logs, flags))
    }

    /// With `t = g(x) = q^-1(x)` and `s = f(x) = p^-1(x)`:
    /// `|BC| = p(t) - q(t) = theta(t)`, `|ED| = p(x) - q(x) = theta(x)`,
    /// `|DD'| = q(x) - x = x^2`, and `delta = |AB| = t - s` solves
    /// `delta (1 + 2t - delta) = theta(t - delta)`.
    fn sample_flat(&self, x: f64) -> Result<GeometricSample> {
        let bracket = self.g.bracket();
        if x == 0.0 || !bracket.contains(x) {
            return Err(Error::ConfigurationViolated(x));
        }
        // stable root of t^2 + t - x = 0
        let t = 2.0 * x / (1.0 + (1.0 + 4.0 * x).sqrt());
        let p = match self.f.kind() {
            FnKind::Inverse(p) => p,
            _ => unreachable!("route is only chosen for the flat pair"),
        };
        let flat = |u: f64| p.flat_log(u).unwrap_or_else(|| log_theta(u));

        let log_ab = flat_gap_log(t, flat);
        // ln theta(x) = ln theta(t) - gap, with x - t = t^2 kept exact
        let log_bc = flat(t);
        let logs = LogLengths {
            ab: log_ab,
            bc: log_bc,
            ed: log_bc - log_theta_gap(t, t * t),
            ddp: 2.0 * x.abs().ln(),
            fdp: flat(t),
        };
        Ok(GeometricSample::from_logs(x, logs, Vec::new()))
    }
}

/// `ln delta` for `delta (1 + 2t - delta) = exp(flat(t - delta))`, by
/// fixed-point iteration from `delta = 0`. The map is a contraction for
/// `|t| <= 1/2` and converges in a handful of steps.
fn flat_gap_log(t: f64, flat: impl Fn(f64) -> f64) -> f64 {
    let mut delta = 0.0f64;
    let mut log_delta = f64::NEG_INFINITY;
    for _ in 0..200 {
        log_delta = flat(t - delta) - (1.0 + 2.0 * t - delta).ln();
        let next = log_delta.exp();
        if next == delta {
            break;
        }
        delta = next;
    }
    log_delta
}

/// Samples one abscissa; see [`GeometricPair`].
pub fn geometric_sample(
    f: &NumericFunction,
    g: &NumericFunction,
    x: f64,
) -> Result<GeometricSample> {
    GeometricPair::new(f.clone(), g.clone())?.sample(x)
}

/// `|AB| / |BC|`, the difference quotient of `f` between `f^-1(g(x))` and
/// `x`. By the mean value theorem it equals `f'` somewhere in between, so it
/// tends to `f'(0) = 1` for any C^1 pair.
pub fn mvt_ratio_check(f: &NumericFunction, g: &NumericFunction, x: f64) -> Result<f64> {
    let s = geometric_sample(f, g, x)?;
    if s.ratio_ab_bc.is_nan() {
        return Err(Error::Indeterminate(x));
    }
    Ok(s.ratio_ab_bc)
}
