use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage an error originated from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    State,
    Generators,
    Gradient,
    Hessian,
    Solve,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::State => "clifford-point state",
            Stage::Generators => "generator conjugation",
            Stage::Gradient => "gradient",
            Stage::Hessian => "hessian",
            Stage::Solve => "quadratic solve",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} appears more than once")]
    DuplicateIndex { index: usize },

    #[error("unknown Pauli letter {letter:?} in token {token:?}")]
    UnknownLetter { letter: char, token: String },

    #[error("malformed Pauli token {token:?}")]
    MalformedToken { token: String },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("gate acts on wire {wire}, circuit has {n_qubits} qubits")]
    WireOutOfRange { wire: usize, n_qubits: usize },

    #[error("two-qubit gate has duplicate wire {wire}")]
    DuplicateWires { wire: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: coefficient {text:?} is not a real number")]
    NonRealCoefficient { line: usize, text: String },

    #[error("element {index}: {message}")]
    Schema { index: usize, message: String },

    #[error("invalid document: {0}")]
    Document(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {n_qubits} qubits, cap is {cap}")]
    CapExceeded { what: &'static str, n_qubits: usize, cap: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost pipeline stage, if the error was annotated with one.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub(crate) fn check_width(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
