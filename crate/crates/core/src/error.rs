//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("ring axiom `{axiom}` fails at witness {witness}")]
    RingAxiomViolation { axiom: &'static str, witness: String },

    #[error("relation pair ({0}, {1}) references an element outside R#")]
    InvalidPair(String, String),

    #[error("coordinate index {index} out of range for a product of {arity} rings")]
    InvalidCoordinate { index: usize, arity: usize },

    #[error("element {0} does not belong to the expected ring")]
    ForeignElement(String),

    #[error("units admit no factorization: {0}")]
    NotFactorable(String),

    #[error("units are not classifiable: {0}")]
    NotClassifiable(String),

    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),

    #[error("refinement target {0} is not an essential divisor")]
    InvalidTarget(String),

    #[error("not projectable: {0}")]
    NotProjectable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("element {value} outside the carrier of {ring}")]
    RangeError { value: String, ring: String },

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },

    #[error("no essential residue found while rearranging {0}; this is an engine bug")]
    FixpointFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
