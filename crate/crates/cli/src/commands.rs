use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use arnold_core::elementary::eval_expr;
use arnold_core::numeric::{
    counterexample_pair, log_spaced, sweep as run_sweep, Bracket, GeometricPair, NumericFunction,
    Side, SweepTable,
};
use arnold_core::{
    arnold_ratio, compositional_inverse, parse, Error, FunctionExpr, ParseError, Rational,
    TruncatedSeries,
};
use serde_json::{json, Value};

use crate::{SeriesFormat, SweepArgs, TableFormat};

#[derive(Debug)]
pub enum Failure {
    Parse { input: String, error: ParseError },
    Domain(Error),
    Usage(String),
    Empty(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Parse { .. } => 2,
            Failure::Domain(_) => 3,
            Failure::Usage(_) => 4,
            Failure::Empty(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse { input, error } => {
                let caret = input.get(..error.offset).map_or(0, |s| s.chars().count());
                write!(f, "{error}\n  {input}\n  {}^", " ".repeat(caret))
            }
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Usage(m) | Failure::Empty(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(error) => Failure::Parse {
                input: String::new(),
                error,
            },
            other => Failure::Domain(other),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn parse_expr(text: &str) -> Result<FunctionExpr, Failure> {
    parse(text).map_err(|error| Failure::Parse {
        input: text.to_string(),
        error,
    })
}

fn expand(text: &str, order: usize) -> Result<TruncatedSeries, Failure> {
    let e = parse_expr(text)?;
    Ok(eval_expr(&e, order)?)
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

/// One `k  a_k` line per coefficient, both columns right-aligned.
fn aligned(s: &TruncatedSeries) -> String {
    let cells: Vec<String> = s.coefficients().iter().map(Rational::to_string).collect();
    let kw = s.order().to_string().len();
    let cw = cells.iter().map(String::len).max().unwrap_or(1);
    let mut out = format!("{s}\n");
    for (k, c) in cells.iter().enumerate() {
        out.push_str(&format!("{k:>kw$}  {c:>cw$}\n"));
    }
    out
}

pub fn eval(expr: &str, order: usize, format: SeriesFormat) -> CmdResult {
    if order < 1 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    let s = expand(expr, order)?;
    match format {
        SeriesFormat::Json => emit(&pretty(&s), None),
        SeriesFormat::Text => emit(&aligned(&s), None),
    }
}

/// A rational given as `"n/d"`, `"n"`, a JSON integer, or `{"num", "den"}`.
fn rational_from_json(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => s.parse().ok(),
        Value::Number(n) => n.as_i64().map(Rational::from),
        Value::Object(_) => serde_json::from_value(v.clone()).ok(),
        _ => None,
    }
}

/// Accepts the engine's own series JSON or a bare coefficient array.
fn series_from_json(text: &str) -> Result<TruncatedSeries, Failure> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Failure::Usage(format!("--series-json is not valid JSON: {e}")))?;
    if let Value::Array(items) = &v {
        let coeffs = items
            .iter()
            .map(rational_from_json)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Failure::Usage("unreadable coefficient in --series-json".into()))?;
        return Ok(TruncatedSeries::new(coeffs)?);
    }
    serde_json::from_value(v).map_err(|e| Failure::Usage(format!("bad series JSON: {e}")))
}

pub fn invert(
    expr: Option<&str>,
    series_json: Option<&str>,
    order: Option<usize>,
    with_residuals: bool,
) -> CmdResult {
    let f = match (expr, series_json) {
        (Some(text), _) => {
            let order = order.ok_or_else(|| Failure::Usage("--expr needs --order".into()))?;
            expand(text, order)?
        }
        (None, Some(src)) => {
            let text = if src.trim_start().starts_with(['{', '[']) {
                src.to_string()
            } else {
                fs::read_to_string(src)
                    .map_err(|e| Failure::Usage(format!("cannot read {src}: {e}")))?
            };
            let s = series_from_json(&text)?;
            match order {
                Some(n) if n > s.order() => {
                    return Err(Failure::Usage(format!(
                        "--order {n} exceeds the series order {}",
                        s.order()
                    )))
                }
                Some(n) => s.truncate(n),
                None => s,
            }
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let w = compositional_inverse(&f)?;
    let out = if with_residuals {
        json!({ "inverse": w.inverse, "residuals": w.residuals })
    } else {
        json!({ "inverse": w.inverse })
    };
    emit(&pretty(&out), None)
}

pub fn limit(f: &str, g: &str, order: usize) -> CmdResult {
    let fs = expand(f, order)?;
    let gs = expand(g, order)?;
    emit(&pretty(&arnold_ratio(&fs, &gs)?), None)
}

fn write_table(table: &SweepTable, out: Option<&Path>, format: TableFormat) -> CmdResult {
    let text = match format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Json => table.to_json() + "\n",
    };
    emit(&text, out)?;
    if table.valid_rows().next().is_none() {
        return Err(Failure::Empty("no row produced a valid sample".into()));
    }
    Ok(())
}

pub fn counterexample(
    t_min: f64,
    t_max: f64,
    points: usize,
    left: bool,
    out: Option<&Path>,
    format: TableFormat,
) -> CmdResult {
    if !(0.0 < t_min && t_min < t_max && t_max < 0.5) {
        return Err(Failure::Usage(format!(
            "need 0 < t-min < t-max < 0.5, got t-min = {t_min}, t-max = {t_max}"
        )));
    }
    if points == 0 {
        return Err(Failure::Usage("--points must be at least 1".into()));
    }
    let side = if left { Side::Left } else { Side::Right };
    let (f, g) = counterexample_pair(side)?;
    let pair = GeometricPair::new(f, g)?;
    // x = q(t) so that g(x) = t; on the left t runs over negative values
    let xs: Vec<f64> = log_spaced(t_max, t_min, points)
        .into_iter()
        .map(|t| if left { -t + t * t } else { t + t * t })
        .collect();
    write_table(&run_sweep(&pair, &xs)?, out, format)
}

fn abscissae(a: &SweepArgs) -> Result<Vec<f64>, Failure> {
    if let Some(xs) = &a.xs {
        return Ok(xs.clone());
    }
    let (lo, hi) = (a.x_min.unwrap_or_default(), a.x_max.unwrap_or_default());
    if a.points == 0 {
        return Err(Failure::Usage("--points must be at least 1".into()));
    }
    let valid = if hi > 0.0 {
        0.0 < lo && lo < hi
    } else {
        lo < hi && hi < 0.0
    };
    if !valid {
        return Err(Failure::Usage(format!(
            "need --x-min < --x-max on one side of 0, got [{lo}, {hi}]"
        )));
    }
    // walk toward the origin
    Ok(if hi > 0.0 {
        log_spaced(hi, lo, a.points)
    } else {
        log_spaced(lo, hi, a.points)
    })
}

pub fn sweep(a: &SweepArgs) -> CmdResult {
    let xs = abscissae(a)?;
    let negative = xs.first().is_some_and(|x| *x < 0.0);
    let pair = if a.counterexample {
        let side = if negative { Side::Left } else { Side::Right };
        let (f, g) = counterexample_pair(side)?;
        GeometricPair::new(f, g)?
    } else {
        let bracket = match a.bracket.as_deref() {
            Some([lo, hi]) => Bracket::new(*lo, *hi)?,
            Some(_) => return Err(Failure::Usage("--bracket takes lo,hi".into())),
            None if negative => Bracket::new(-1.0, 0.0)?,
            None => Bracket::new(0.0, 1.0)?,
        };
        let f = parse_expr(a.f.as_deref().unwrap_or_default())?;
        let g = parse_expr(a.g.as_deref().unwrap_or_default())?;
        GeometricPair::new(
            NumericFunction::expr(&f, bracket)?,
            NumericFunction::expr(&g, bracket)?,
        )?
    };
    let table = run_sweep(&pair, &xs).map_err(|e| match e {
        Error::InvalidInput(m) => Failure::Usage(m),
        other => Failure::Domain(other),
    })?;
    write_table(&table, a.out.as_deref(), a.format)
}
