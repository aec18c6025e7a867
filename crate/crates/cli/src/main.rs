//! `arnold-lab`: exact series and numeric experiments from the command line.
//!
//! Exit codes: 0 ok, 2 parse error, 3 domain error, 4 usage error,
//! 5 empty result.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "arnold-lab",
    version,
    about = "Exact series reversion and the Arnold limit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand an expression as a truncated series.
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Json)]
        format: SeriesFormat,
    },
    /// Compositional inverse of a series.
    Invert(InvertArgs),
    /// Exact limit of (f - g) / (g^-1 - f^-1) at 0.
    Limit {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        order: usize,
    },
    /// Geometric sweep of the flat counterexample over log-spaced t.
    Counterexample {
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Probe x < 0 instead of x > 0.
        #[arg(long)]
        left: bool,
    },
    /// Geometric sweep of an arbitrary pair.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["expr", "series_json"])))]
struct InvertArgs {
    #[arg(long)]
    expr: Option<String>,
    /// Inline JSON or a path to a JSON file.
    #[arg(long)]
    series_json: Option<String>,
    /// Required with --expr; truncates --series-json input when given.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    with_residuals: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(
        long,
        required_unless_present = "counterexample",
        conflicts_with = "counterexample"
    )]
    f: Option<String>,
    #[arg(
        long,
        required_unless_present = "counterexample",
        conflicts_with = "counterexample"
    )]
    g: Option<String>,
    /// Use the flat pair (p^-1, q^-1) instead of --f/--g.
    #[arg(long)]
    counterexample: bool,
    /// Comma-separated abscissae, strictly shrinking toward 0.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with_all = ["x_min", "x_max"],
        required_unless_present_all = ["x_min", "x_max"]
    )]
    xs: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true, requires = "x_max")]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "x_min")]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Domain bracket "lo,hi" for --f/--g; defaults to [0, 1] or [-1, 0].
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    bracket: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFormat {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("ARNOLD_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(Failure::Usage(format!(
                "ARNOLD_LAB_THREADS must be a positive integer, got `{raw}`"
            )))
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Eval {
            expr,
            order,
            format,
        } => commands::eval(&expr, order, format),
        Command::Invert(a) => commands::invert(
            a.expr.as_deref(),
            a.series_json.as_deref(),
            a.order,
            a.with_residuals,
        ),
        Command::Limit { f, g, order } => commands::limit(&f, &g, order),
        Command::Counterexample {
            t_min,
            t_max,
            points,
            out,
            format,
            left,
        } => commands::counterexample(t_min, t_max, points, left, out.as_deref(), format),
        Command::Sweep(a) => commands::sweep(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
