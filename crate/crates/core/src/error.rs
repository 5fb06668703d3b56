use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order cap exceeded: group closure grew past {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("non-unimodular generator at index {index}")]
    NonUnimodular { index: usize },
    #[error("generator {index} is {rows}x{cols}, expected {expected}x{expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("size cap exceeded: {what} is {size}, cap is {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: String,
        cap: String,
    },
    #[error("cocycle law violated")]
    CocycleLawViolated,
    #[error("element does not normalize the subgroup")]
    DoesNotNormalize,
    #[error("first cohomology has a free part; the subgroup cannot be finite")]
    InfiniteCohomology,
    #[error("non-integral average of traces: {0}")]
    NonIntegralAverage(String),
    #[error("H is not a proper subgroup of F")]
    NotProperSubgroup,
    #[error("relation is not a strict partial order: {0}")]
    NotStrictOrder(String),
    #[error("generated subgroup of the crystallographic group is not finite")]
    InfiniteSubgroup,
    #[error("non-integral coefficient {coefficient} for class {class}")]
    NonIntegralCoefficient { class: String, coefficient: String },
    #[error("assembly paths disagree: {0}")]
    PathMismatch(String),
    #[error("orbifold Euler characteristic is {0}, expected 0")]
    NonzeroOrbifold(String),
}
