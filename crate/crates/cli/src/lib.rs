//! Command-line front end for the target-zone solvers: configuration merging,
//! the `calibrate`/`solve`/`simulate` pipelines and figure data export.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod output;

pub use commands::{run_calibrate, run_simulate, run_solve, CommandOutput};
pub use config::{parse_config, McSettings, RunConfig};
pub use error::CliError;
pub use figures::run_figure;
