//! Command-line front end for `bloch-core`.
//!
//! Subcommands print JSON (CSV for the `constants` and `sweep` tables) and exit with 0 when
//! every check passes, 1 when a mathematical check fails and 2 on usage or input errors.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;

pub use args::Cli;
pub use commands::{run, Report};
pub use error::{CliError, CliResult};
