use thiserror::Error;

use crate::complex::{ArcId, FaceId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("complex has no facets")]
    NoFacets,
    #[error("empty face in input")]
    EmptyFace,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("level {level} out of range (complex has {levels} levels)")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("dimension {dim} out of range 1..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("prime {0} exceeds 2^15")]
    TooLarge(u32),
    #[error("unknown field '{0}' (expected q or gfP)")]
    Unknown(String),
    #[error("no fields given")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("arc {0} does not exist")]
    UnknownArc(ArcId),
    #[error("face {face} is incident to arcs {first} and {second}")]
    OverMatched { face: FaceId, first: ArcId, second: ArcId },
    #[error("directed cycle in level {level} through faces {faces:?}")]
    Cycle { level: usize, faces: Vec<FaceId>, arcs: Vec<ArcId> },
    #[error("function violates the Morse condition at face {face}")]
    NotMorseFunction { face: FaceId },
    #[error("function has {got} values but the complex has {expected} faces")]
    FunctionLength { expected: usize, got: usize },
    #[error("complex is disconnected")]
    Disconnected,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable {var}: lower bound {lo} exceeds upper bound {hi}")]
    InvalidBounds { var: usize, lo: f64, hi: f64 },
    #[error("row refers to variable {var} but the program has {n} variables")]
    UnknownVariable { var: usize, n: usize },
    #[error("row has a non-finite entry")]
    NonFinite,
    #[error("objective has {got} entries, expected {expected}")]
    ObjectiveLength { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error("matching inequality violated at face {face}: {value}")]
    MatchingViolated { face: FaceId, value: f64 },
    #[error("point has {got} entries, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("level has {faces} faces, brute force is limited to {limit}")]
    TooLarge { faces: usize, limit: usize },
    #[error("recovered walk repeats face {0}")]
    NonSimple(FaceId),
    #[error("transformed cycle is not consistent")]
    Inconsistent,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("complex is disconnected ({components} components); enable component splitting")]
    Disconnected { components: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("branching on an integral solution")]
    IntegralBranch,
    #[error("weight vector has {got} entries, expected {expected}")]
    Weights { expected: usize, got: usize },
    #[error("numerical trouble: {0}")]
    Numerical(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("expected {0}")]
    Shape(&'static str),
    #[error("face {0:?} is not in the complex")]
    UnknownFace(Vec<String>),
    #[error("{upper:?} does not cover {lower:?}")]
    NotAnArc { upper: Vec<String>, lower: Vec<String> },
}
