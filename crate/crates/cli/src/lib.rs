//! Command-line front end for the half-space toolkit, and the acceptance
//! suite shared by `halfspace verify-all` and the `acceptance` test target.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod error;
pub mod json;
pub mod synth;

pub use commands::{execute, init_threads, Cli};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
