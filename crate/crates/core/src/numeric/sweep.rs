//! Tables of geometric samples as `x` approaches the origin.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::geometry::{join_flags, Flag, GeometricPair, GeometricSample};

pub const CSV_HEADER: &str = "x,AB,BC,ED,DDp,FDp,ratio_AB_BC,ratio_BC_ED,log_ratio_DDp_FDp,flags";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub f: String,
    pub g: String,
    pub bracket: [f64; 2],
    pub tolerance: f64,
    pub log_space: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub metadata: SweepMetadata,
    pub rows: Vec<GeometricSample>,
}

/// Checks that `xs` is nonempty, of one sign, and strictly shrinking in
/// magnitude (so the rows walk toward the origin).
fn check_abscissae(xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one x".into()));
    }
    if xs.iter().any(|x| !x.is_finite() || *x == 0.0) {
        return Err(Error::InvalidInput(
            "sweep abscissae must be finite and nonzero".into(),
        ));
    }
    let sign = xs[0].signum();
    if xs.iter().any(|x| x.signum() != sign) {
        return Err(Error::InvalidInput(
            "sweep abscissae must share one sign".into(),
        ));
    }
    if xs.windows(2).any(|w| w[1].abs() >= w[0].abs()) {
        return Err(Error::InvalidInput(
            "sweep abscissae must strictly decrease in magnitude".into(),
        ));
    }
    Ok(())
}

/// One row per `x`, in input order. Rows whose sample fails carry NaN
/// lengths and a flag naming the failure; the sweep itself continues.
/// Rows are evaluated in parallel on the current rayon pool.
pub fn sweep(pair: &GeometricPair, xs: &[f64]) -> Result<SweepTable> {
    check_abscissae(xs)?;
    let rows = xs
        .par_iter()
        .map(|&x| match pair.sample(x) {
            Ok(s) => s,
            Err(e) => GeometricSample::failed(x, Flag::from_error(&e)),
        })
        .collect();
    let b = pair.f().bracket();
    Ok(SweepTable {
        metadata: SweepMetadata {
            f: pair.f().describe(),
            g: pair.g().describe(),
            bracket: [b.lo, b.hi],
            tolerance: pair.tolerance(),
            log_space: pair.is_log_space(),
        },
        rows,
    })
}

/// `n` points from `hi` down to `lo`, evenly spaced in `ln|x|`. One point
/// gives just `hi`. Both ends must share a sign.
pub fn log_spaced(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![hi];
    }
    let sign = hi.signum();
    let (a, b) = (hi.abs().ln(), lo.abs().ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                lo
            } else if i == 0 {
                hi
            } else {
                sign * (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl SweepTable {
    /// Rows with a usable sample.
    pub fn valid_rows(&self) -> impl Iterator<Item = &GeometricSample> {
        self.rows
            .iter()
            .filter(|r| !r.flags.iter().any(|f| f.is_fatal()))
    }

    /// Doubles with 17 significant digits; exact zeros print as `0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [
                r.x,
                r.ab,
                r.bc,
                r.ed,
                r.ddp,
                r.fdp,
                r.ratio_ab_bc,
                r.ratio_bc_ed,
                r.log_ratio_ddp_fdp,
            ];
            for v in fields {
                out.push_str(&fmt_f64(v));
                out.push(',');
            }
            let _ = writeln!(out, "{}", join_flags(&r.flags));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::numeric::function::{Bracket, NumericFunction};
    use crate::numeric::geometry::{counterexample_pair, Side};

    fn analytic_pair() -> GeometricPair {
        let b = Bracket::new(0.0, 1.0).unwrap();
        let f = NumericFunction::expr(&parse("tan o sin").unwrap(), b).unwrap();
        let g = NumericFunction::expr(&parse("sin o tan").unwrap(), b).unwrap();
        GeometricPair::new(f, g).unwrap()
    }

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced(0.1, 1e-6, 1), vec![0.1]);
        let xs = log_spaced(1e-1, 1e-6, 6);
        assert_eq!(xs.len(), 6);
        assert_eq!(xs[0], 0.1);
        assert_eq!(xs[5], 1e-6);
        assert!((xs[2] - 1e-3).abs() < 1e-15);
        let neg = log_spaced(-0.1, -0.001, 3);
        assert!((neg[1] + 0.01).abs() < 1e-15);
    }

    #[test]
    fn analytic_ratios_approach_one() {
        let t = sweep(&analytic_pair(), &[0.3, 0.2, 0.1, 0.05]).unwrap();
        let dev: Vec<(f64, f64)> = t
            .rows
            .iter()
            .map(|r| ((r.ratio_ab_bc - 1.0).abs(), (r.ratio_bc_ed - 1.0).abs()))
            .collect();
        for w in dev.windows(2) {
            assert!(w[1].0 < w[0].0 && w[1].1 < w[0].1, "{dev:?}");
        }
    }

    #[test]
    fn counterexample_columns() {
        let (f, g) = counterexample_pair(Side::Right).unwrap();
        let pair = GeometricPair::new(f, g).unwrap();
        let ts = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let xs: Vec<f64> = ts.iter().map(|t| t + t * t).collect();
        let table = sweep(&pair, &xs).unwrap();
        let last = table.rows.last().unwrap();
        assert!((last.ratio_bc_ed - (-1.0f64).exp()).abs() < 1e-5);
        for w in table.rows.windows(2) {
            assert!(w[1].log_ratio_ddp_fdp > w[0].log_ratio_ddp_fdp);
        }
    }

    #[test]
    fn rejects_bad_abscissae() {
        let pair = analytic_pair();
        assert!(sweep(&pair, &[]).is_err());
        assert!(sweep(&pair, &[0.1, 0.2]).is_err());
        assert!(sweep(&pair, &[0.1, -0.05]).is_err());
        assert!(sweep(&pair, &[0.1, 0.0]).is_err());
    }

    #[test]
    fn failed_rows_are_flagged() {
        let b = Bracket::new(0.0, 1.0).unwrap();
        let f = NumericFunction::expr(&parse("sin").unwrap(), b).unwrap();
        let g = NumericFunction::expr(&parse("arctan").unwrap(), b).unwrap();
        let t = sweep(&GeometricPair::new(f, g).unwrap(), &[0.2, 0.1]).unwrap();
        assert_eq!(t.valid_rows().count(), 0);
        assert!(t.rows[0].flags.contains(&Flag::ConfigurationViolated));
        assert!(t
            .to_csv()
            .lines()
            .nth(1)
            .unwrap()
            .ends_with("configuration_violated"));
    }

    #[test]
    fn csv_format() {
        let (f, g) = counterexample_pair(Side::Right).unwrap();
        let table = sweep(&GeometricPair::new(f, g).unwrap(), &[0.11, 1e-3]).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 10);
        assert_eq!(first[0], "1.1000000000000000e-1");
        let second: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(second[2], "0");
        assert_eq!(second[9], "logspace");
    }

    #[test]
    fn json_mirror() {
        let table = sweep(&analytic_pair(), &[0.2, 0.1]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&table.to_json()).unwrap();
        let row = &v["rows"][0];
        for key in CSV_HEADER.split(',') {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["metadata"]["f"], "tan o sin");
    }

    #[test]
    fn parallel_matches_sequential() {
        let pair = analytic_pair();
        let xs = log_spaced(0.3, 0.01, 40);
        let parallel = sweep(&pair, &xs).unwrap();
        let sequential: Vec<GeometricSample> =
            xs.iter().map(|&x| pair.sample(x).unwrap()).collect();
        assert_eq!(parallel.to_csv(), {
            let t = SweepTable {
                metadata: parallel.metadata.clone(),
                rows: sequential,
            };
            t.to_csv()
        });
    }
}
