//! Error type shared across the crate.

/// Unified error type; message payloads name the offending field or token.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument `{field}`: {msg}")]
    InvalidArgument { field: &'static str, msg: String },

    #[error("catalog parse error at line {line}: {msg}")]
    CatalogParse { line: usize, msg: String },

    #[error("catalog validation error: {0}")]
    CatalogInvalid(String),

    #[error("sequence parse error at token {index} (`{token}`): {msg}")]
    SequenceParse {
        index: usize,
        token: String,
        msg: String,
    },

    #[error("classical code `{id}` follows a quantum code; classical levels must come first")]
    ClassicalAfterQuantum { id: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("code `{id}` has no tableau; only repetition and even-n parity codes are simulable")]
    NotSimulable { id: String },

    #[error("register too wide: {width} output qubits exceeds the 64-qubit simulator limit")]
    TooWide { width: u128 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
