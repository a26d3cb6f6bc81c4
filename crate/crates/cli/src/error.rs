use std::fmt;
use std::path::Path;

use qcx_core::{Error, Stage};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const GENERIC: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const EXPAND: u8 = 3;
    pub const SOLVE: u8 = 4;
    pub const CAP: u8 = 5;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: exit::INPUT, message: message.into() }
    }

    pub fn generic(message: impl Into<String>) -> Self {
        CliError { code: exit::GENERIC, message: message.into() }
    }

    pub(crate) fn read(path: &Path, err: std::io::Error) -> Self {
        CliError::input(format!("cannot read {}: {err}", path.display()))
    }

    pub(crate) fn write(path: &Path, err: std::io::Error) -> Self {
        CliError::generic(format!("cannot write {}: {err}", path.display()))
    }

    /// Attach a file name to a core error raised while loading it.
    pub(crate) fn in_file(path: &Path, err: Error) -> Self {
        let mut e = CliError::from(err);
        e.message = format!("{}: {}", path.display(), e.message);
        e
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn innermost(err: &Error) -> &Error {
    match err {
        Error::Stage { source, .. } => innermost(source),
        e => e,
    }
}

pub fn exit_code(err: &Error) -> u8 {
    if matches!(innermost(err), Error::CapExceeded { .. }) {
        return exit::CAP;
    }
    match err.stage() {
        Some(Stage::Solve) => exit::SOLVE,
        Some(_) => exit::EXPAND,
        None => match err {
            Error::NonFinite(_) => exit::EXPAND,
            _ => exit::INPUT,
        },
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = exit_code(&err);
        let mut message = err.to_string();
        if code == exit::CAP {
            message.push_str(
                "; dense verification is limited to desk-scale inputs, raise --max-qubits or use a smaller instance",
            );
        }
        CliError { code, message }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
