//! Front end for the `blockage-net` binary: configuration, run modes and CSV
//! output.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use config::{Mode, RunConfig};
pub use error::{CliError, Result};
