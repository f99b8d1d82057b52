//! Mixed double Hurwitz numbers: walks in the transposition Cayley graph of
//! the symmetric group with a monotone prefix and a free suffix, computed by
//! character sums, generating-series logarithms and brute-force enumeration.

pub mod chamber;
pub mod characters;
pub mod content;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod partitions;
pub mod series;
pub mod toda;
pub mod walks;

pub use engine::{HurwitzEngine, HurwitzQuery, HurwitzValue, Method};
pub use error::{Error, Result};
pub use partitions::Partition;
pub use series::{TruncatedSeries, Truncation};
