//! Benchmark harness: configuration, execution, checks and output.

pub mod checks;
pub mod config;
pub mod emit;
pub mod fit;
pub mod run;
pub mod studies;

pub use checks::{evaluate_checks, fit_slope, CheckOutcome};
pub use config::{BenchConfig, Family, Metric, MpfVariant, SchemeSpec};
pub use emit::emit_all;
pub use fit::{fit_loglog, SlopeFit, ERROR_WINDOW};
pub use run::{run_benchmark, BenchRecord, BenchReport};
