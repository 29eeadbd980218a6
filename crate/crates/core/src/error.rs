use thiserror::Error;

/// Errors raised by the geometric kernels and the constructions built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("circles do not intersect transversally (inversive product {0})")]
    NoIntersection(f64),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("point is not on the disk side of the plane (form value {0})")]
    OutsideDisk(f64),
    #[error("map is not loxodromic: {0}")]
    NotLoxodromic(String),
    #[error("invalid Fenchel-Nielsen data: {0}")]
    InvalidCoordinates(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid multicurve: {0}")]
    InvalidMulticurve(String),
    #[error("y = {y} outside crescent chart [0, {theta}]")]
    OutOfChart { y: f64, theta: f64 },
    #[error("point lies on a lifted leaf; perturb it by about {suggested_offset:e}")]
    OnLeaf { suggested_offset: f64 },
    #[error("truncation radius {0} contains no stratum")]
    TruncationTooSmall(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point too close to the complement (chordal distance {0:e})")]
    TooCloseToComplement(f64),
    #[error("curve {0} is not part of the multicurve")]
    CurveNotInMulticurve(String),
    #[error("transversality failure: {0}")]
    Transversality(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
