use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("limit exceeded: {what} = {value} exceeds the cap {cap}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("(alpha, beta) = ({alpha}, {beta}) lies on the wall I = {i:?}, J = {j:?}")]
    OnWall {
        alpha: String,
        beta: String,
        i: Vec<usize>,
        j: Vec<usize>,
    },

    #[error("point outside the region: {0}")]
    OutsideRegion(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("cannot parse regular function: {0}")]
    Parse(String),

    #[error("only {available} lattice points available in the chamber, {requested} requested")]
    Exhausted { available: usize, requested: usize },

    #[error("interpolation system is singular: {0}")]
    Singular(String),

    #[error("no polynomial of degree <= {cap} fits: {diagnostic}")]
    DegreeCapExceeded { cap: u32, diagnostic: String },

    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
