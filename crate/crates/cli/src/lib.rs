//! Library side of the `varbound` command: scenario loading, CSV tables and
//! the subcommand implementations. `main.rs` only parses flags.

pub mod commands;
pub mod csvio;
pub mod error;
pub mod scenario;

pub use error::CliError;
