//! The `qcx` command line: ansatz generation and selection, expansion,
//! dense verification, optimization and benchmarking.

pub mod args;
pub mod commands;
pub mod document;
pub mod error;

pub use args::Cli;
pub use commands::{fit_exponent, run};
pub use error::{CliError, CliResult};
