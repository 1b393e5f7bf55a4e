use thiserror::Error;

use crate::class::ConceptClass;
use crate::compression::SchemeViolation;
use crate::vertex::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ambient dimension {0} exceeds the supported maximum of 63")]
    DimensionTooLarge(usize),

    #[error("coordinate {coord} is outside [1, {n}]")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("operation is undefined on the empty class")]
    EmptyClass,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} refuses n = {n} (limit {limit}); pass --force to override")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("class is not intersection closed: {0} and {1} intersect outside the class")]
    NotIntersectionClosed(Vertex, Vertex),

    #[error("{below} is not below {above} in the coordinate order")]
    NotBelow { below: Vertex, above: Vertex },

    #[error("vertex {0} of the subclass is missing from the superclass")]
    NotContained(Vertex),

    #[error("{0} is not extremal")]
    NotExtremal(&'static str),

    #[error("subclass must be a proper, non-empty subset of the class")]
    NotProperSubclass,

    #[error("class needs at least {0} vertices")]
    TooSmall(usize),

    #[error("sandwich construction failed: {0}")]
    Sandwich(String),

    #[error("invalid representation map: {0}")]
    Scheme(#[from] SchemeViolation),

    #[error("no ccc chain found; stuck at a class of {} vertices", .stuck.len())]
    NoCccChain { stuck: ConceptClass },

    #[error("labelling {0} is not realised by the class on the given domain")]
    Unrealisable(Vertex),

    #[error("representation {0:?} is not in the image of the scheme")]
    NotInImage(Vec<usize>),

    #[error("invalid coordinate ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
