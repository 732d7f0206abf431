//! Scenario files, built-in scenarios, the catalog cache, reports and the
//! `extricat` command line.

pub mod cache;
pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;
pub mod world;

pub use commands::{run, Output};
pub use error::CliError;
pub use report::{Report, Section};
pub use scenario::{builtin_scenario, parse_scenario, Scenario};
pub use world::World;
