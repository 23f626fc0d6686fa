//! Batch front-end for `gibbs-core`: versioned JSON model files in,
//! deterministic JSON reports and CSV curves out.

pub mod commands;
pub mod error;
pub mod model;
pub mod report;

pub use commands::{run, Cli, Command, Outcome};
pub use error::CliError;
