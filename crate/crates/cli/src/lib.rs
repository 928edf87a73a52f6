//! File formats, reports, random instances and the batch hunt behind the
//! `omnivocal` command-line tool.

pub mod commands;
pub mod error;
pub mod generate;
pub mod hunt;
pub mod io;
pub mod report;

pub use commands::{OmnivocalityMethod, Output, RunConfig};
pub use error::CliError;
