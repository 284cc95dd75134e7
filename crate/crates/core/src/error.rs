use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot evaluate a Laurent polynomial at q = 0")]
    ZeroEvaluationPoint,

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("malformed word: letter {letter} is outside 1..={max}")]
    MalformedWord { letter: usize, max: usize },

    #[error("block split k = {k} is outside 0..={n}")]
    InvalidBlockSplit { n: usize, k: usize },

    #[error("{0} is not a minimal coset representative")]
    NotMinimalRepresentative(String),

    #[error("sign string {string} has {found} minus signs, expected {expected}")]
    WrongMinusCount {
        string: String,
        found: usize,
        expected: usize,
    },

    #[error("invalid sign string: {0}")]
    InvalidSignString(String),

    #[error("boundary mismatch: cannot stack a diagram with {upper} bottom points on one with {lower} top points")]
    BoundaryMismatch { lower: usize, upper: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid parenthesis diagram: {0}")]
    InvalidParenthesis(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("size {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("diagram is not in the induced basis for k = {0}")]
    NotInInducedBasis(usize),

    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("element kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("bar module is invalid: {0}")]
    InvalidBarModule(String),

    #[error("canonical basis solver failed at label {label}: residual {residual} is not antisymmetric with zero constant term")]
    SolverFailure { label: String, residual: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
