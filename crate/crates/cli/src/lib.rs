//! Scenario runner: TOML scenario files in, CSV traces, joint-intensity
//! matrices, SVG panels and a metrics summary out.

pub mod error;
pub mod output;
pub mod pipeline;
pub mod presets;
pub mod scenario;

pub use error::{CliError, CliResult};
pub use pipeline::{oracle_check, run_scenario, OracleReport, RunSummary};
pub use scenario::{Overrides, Scenario};
