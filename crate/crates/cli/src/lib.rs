//! Command-line front end: `simulate`, `sample` and `analyze`.

pub mod commands;
pub mod config;
pub mod error;
pub mod plots;
pub mod render;
pub mod trace;
pub mod units;

pub use commands::{run, Cli};
pub use error::CliError;
