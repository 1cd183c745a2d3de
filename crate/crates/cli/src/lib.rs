//! Configuration, scenario runner and self-checks behind the `spinstar` binary.

pub mod config;
pub mod output;
pub mod scenario;
pub mod verify;

pub use config::{ConfigError, Format, ScenarioConfig};
pub use scenario::{run_scenario, write_outputs, Command, RunError, RunOutput};
