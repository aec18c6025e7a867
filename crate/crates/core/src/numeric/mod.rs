//! Floating-point checks of the segment-length picture and of the flat
//! counterexample built from `theta(x) = exp(-1/|x|)`.

pub mod flat;
pub mod function;
pub mod geometry;
pub mod sweep;

pub use flat::{counterexample_ratio, flatness_check, log_theta, log_theta_gap, theta};
pub use function::{numeric_inverse, Bracket, FnKind, NumericFunction, DEFAULT_TOL};
pub use geometry::{
    counterexample_pair, geometric_sample, mvt_ratio_check, Flag, GeometricPair, GeometricSample,
    LogLengths, Side,
};
pub use sweep::{log_spaced, sweep, SweepMetadata, SweepTable, CSV_HEADER};
