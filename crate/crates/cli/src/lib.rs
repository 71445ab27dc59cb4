//! File formats, configuration, reports and command implementations for
//! the `exergy` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod report;

pub use error::{CliError, Result};
