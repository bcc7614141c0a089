use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("element is not skew under the bar involution")]
    NotSkew,
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("group enumeration exceeded the element ceiling {0} (infinite type or ceiling too low)")]
    ElementCeiling(usize),
    #[error("invalid weight function: {0}")]
    InvalidWeights(String),
    #[error("bar expansion of basis element {0} is not unitriangular over the poset")]
    BarDataCorrupt(usize),
    #[error("element {0} is not a minimal coset representative for the given parabolic")]
    NotMinimalCosetRep(u32),
    #[error("element {0} lies outside the domain of the star operation")]
    StarDomain(u32),
    #[error("subset is not down-closed for the left preorder of the parabolic subgroup")]
    NotDownClosed,
    #[error("element {0} escaped the span of the induced basis")]
    SpanEscape(u32),
    #[error("partitions have different ground sets")]
    GroundSetMismatch,
    #[error("group of order {order} exceeds the limit {limit} for this computation")]
    ResourceLimit { order: usize, limit: usize },
    #[error("cache rejected: {0}")]
    CacheInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
