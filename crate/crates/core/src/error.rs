use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({a}, {b}) out of range for a {n_a}x{n_b} graph")]
    EdgeOutOfRange {
        a: usize,
        b: usize,
        n_a: usize,
        n_b: usize,
    },

    #[error("certificate vertex {index} on side {side} out of range (part size {size})")]
    CertificateOutOfRange {
        side: char,
        index: usize,
        size: usize,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex a{vertex} has degree {degree}, exceeding the bound {bound}")]
    DegreeTooLarge {
        vertex: usize,
        degree: usize,
        bound: usize,
    },

    #[error("expected an n x n graph, got {n_a}x{n_b}")]
    NotSquare { n_a: usize, n_b: usize },

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParameter { name: &'static str, msg: String },

    #[error("enumeration refused: smaller part has {size} vertices (limit {limit})")]
    TooLarge { size: usize, limit: usize },

    #[error("{what}: gave up after {attempts} attempts{detail}")]
    RetriesExhausted {
        what: &'static str,
        attempts: usize,
        detail: String,
    },

    #[error("reduction at delta {delta} found no suitable subset in {attempts} draws")]
    ChainExhausted {
        delta: usize,
        attempts: usize,
        trace: Box<crate::constructive::ReductionTrace>,
    },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, msg: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
