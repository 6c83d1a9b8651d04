//! Command-line front end: algebra files, reports and subcommands.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::run;
