//! Reproduction harness for the `patankar` crate: catalog runs with CSV
//! output, convergence tables and stability figures.

pub mod app;
pub mod config;
pub mod error;
pub mod experiment;
pub mod figures;
pub mod output;
pub mod spec;

pub use app::{execute, self_test, Cli, Command};
pub use error::CliError;
