//! Experiment harness around `mmimo-core`: TOML configuration, the four
//! experiments and their flat CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, Experiment, RunConfig, SteeringConfig};
pub use error::CliError;
pub use output::{write_csv, Row};
pub use run::{run_experiment, RunOutcome, MAX_EXCLUSION_RATE};
