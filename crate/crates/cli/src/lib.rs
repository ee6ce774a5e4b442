//! Spec-file language, reports and subcommands of the `csl` binary.

pub mod commands;
pub mod dsl;
pub mod report;

pub use commands::{run, CheckProperty, Cli, Command};
pub use report::Report;
