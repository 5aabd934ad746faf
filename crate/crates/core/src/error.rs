use thiserror::Error;

use crate::complex::Face;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty face in input")]
    InvalidFace,
    #[error("vertex domains overlap at {0}")]
    DomainClash(String),
    #[error("map is not simplicial: image of {0:?} is not a face")]
    NotSimplicial(Face),
    #[error("assignment missing for vertex {0}")]
    MissingAssignment(String),
    #[error("maps are not composable")]
    NotComposable,
    #[error("{0:?} is not a face")]
    NotAFace(Face),
    #[error("{0:?} is not in the image")]
    NotInImage(Face),
    #[error("{0} and {1} do not span an edge")]
    NotRelated(String, String),
    #[error("move is not elementary: {0}")]
    NotElementary(String),
    #[error("rewrite not applicable: {0}")]
    NotApplicable(String),
    #[error("sequence is not a starring: {0}")]
    NotAStarring(String),
    #[error("no starring found for member {0}")]
    StarringUnavailable(String),
    #[error("replay failed: {0}")]
    ReplayError(String),
    #[error("not a system: {0}")]
    NotASystem(String),
    #[error("base vertices must be integers 0..=n")]
    NotCanonicalBase,
    #[error("derivation contains a barycentric node")]
    UnsupportedDerivation,
    #[error("point for {0:?} is not in the relative interior")]
    NotInterior(Face),
    #[error("choice {0} is not a vertex of the subdivided face")]
    BadChoice(String),
    #[error("map is not cellular at {0:?}")]
    NotCellular(Face),
    #[error("map is not face preserving at {0:?}")]
    NotFacePreserving(Face),
    #[error("construction unavailable: {0}")]
    Unavailable(String),
    #[error("cannot parse vertex name {0:?}")]
    ParseName(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
