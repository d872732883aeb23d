//! File formats, command implementations and the verification suite behind
//! the `hsx` binary.

pub mod builtin;
pub mod cli;
pub mod commands;
pub mod config;
pub mod document;
pub mod error;
pub mod fuzz;
pub mod output;
pub mod verify;

pub use error::{CliError, CliResult};
