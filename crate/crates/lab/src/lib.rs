//! Experiment runner for the HHL emulator and state-vector simulator.
//!
//! [`run_experiment`] runs a problem through one or both backends several
//! times with per-run seeds `seed + run`, and collects histograms, solution
//! estimates, error metrics and timings into an [`ExperimentReport`]. The
//! emulator samples on generator stream 0 and the simulator on stream 1, so
//! the two backends never share shots.
//! [`scaling_sweep`] times both backends across clock register sizes.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod report;

pub use config::{default_output_path, load_problem, Backend, BackendChoice, ExperimentConfig, Format};
pub use error::{LabError, Result};
pub use experiment::{run_experiment, scaling_sweep};
pub use output::{emit_report, emit_sweep, read_run_csv, summary_path, to_json};
pub use report::{BackendReport, ExperimentReport, SweepRow};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HHL_LAB_OUT_DIR";
