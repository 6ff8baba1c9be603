use thiserror::Error;

use crate::bracket::BracketAxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("cannot combine elements of Z/{left} and Z/{right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("{value} is not a unit in Z/{modulus}")]
    NonUnit { value: u32, modulus: u32 },

    #[error("element {label} is outside 1..={size}")]
    IndexOutOfRange { label: usize, size: usize },

    #[error("malformed tensor: {0}")]
    MalformedTensor(String),

    #[error("not a ternary quasigroup: {equation} has {solutions} solutions")]
    NotQuasigroup { equation: String, solutions: usize },

    #[error("not a group table: {0}")]
    NotAGroup(String),

    #[error("{quantity} is not constant: {first:?} gives {first_value}, {second:?} gives {second_value}")]
    NotConstant {
        quantity: &'static str,
        first: [usize; 3],
        first_value: u32,
        second: [usize; 3],
        second_value: u32,
    },

    #[error("coefficient tensors do not satisfy the bracket axioms")]
    InvalidBracket(Box<BracketAxiomReport>),

    #[error("{what}: requested {requested}, bound is {bound}")]
    BoundExceeded {
        what: &'static str,
        requested: usize,
        bound: usize,
    },

    #[error("invalid PD code: {0}")]
    Pd(String),

    #[error("invalid diagram: {0}")]
    Diagram(String),

    #[error("unknown catalog entry {name:?}{}", suggestion.as_ref().map(|s| format!(" (did you mean {s:?}?)")).unwrap_or_default())]
    UnknownName {
        name: String,
        suggestion: Option<String>,
    },

    #[error("catalog asset {file}: {message}")]
    Catalog { file: String, message: String },

    #[error("cannot parse polynomial {0:?}")]
    Polynomial(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by resource guards rather than bad input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}
