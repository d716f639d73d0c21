//! Command-line front end: datum files, dispatch and reports.

pub mod commands;
pub mod datum_file;
pub mod error;
pub mod report;

pub use commands::{execute, run, Cli, Command, Format, Outcome};
pub use error::CliError;
pub use report::Report;
