//! Error type shared by every compiler stage.

use thiserror::Error;

/// Errors reported by parsing, machine loading, mapping, and code emission.
#[derive(Debug, Error)]
pub enum QccError {
    /// Circuit text could not be parsed. Carries the 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Machine description file was rejected.
    #[error("invalid machine description: {0}")]
    Machine(String),

    /// The circuit needs more qubits than the machine provides.
    #[error("circuit needs {needed} qubits but machine '{machine}' has {available}")]
    TooLarge {
        needed: usize,
        available: usize,
        machine: String,
    },

    /// A request was inconsistent with the inputs (bad flag combination,
    /// unknown benchmark name, oversize simulation, ...).
    #[error("{0}")]
    Invalid(String),

    /// Underlying file I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QccError>;
