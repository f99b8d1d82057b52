//! Integer partitions and the small amount of Young-diagram combinatorics
//! the rest of the crate needs: enumeration, centralizer orders, contents,
//! unions, unicellular padding and hook-length dimensions.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive parts.
///
/// The empty partition is a first-class value of size 0. Serializes as a JSON
/// array of integers, e.g. `[3,1,1]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates that `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts the (positive) parts into weakly decreasing order; zero parts are dropped.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The single-row diagram `(d)`; empty when `d == 0`.
    pub fn row(d: u32) -> Self {
        if d == 0 {
            Self::empty()
        } else {
            Partition(vec![d])
        }
    }

    /// The single-column diagram `(1^d)`.
    pub fn column(d: u32) -> Self {
        Partition(vec![1; d as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    /// |λ|, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// ℓ(λ), the number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `m[i]` is the number of parts equal to `i` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.0.first().copied().unwrap_or(0) as usize + 1];
        for &p in &self.0 {
            m[p as usize] += 1;
        }
        m
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// Centralizer order z_λ = Π_i i^{m_i} m_i!, so that |C_λ| = d!/z_λ.
    pub fn z_order(&self) -> BigUint {
        let mut z = BigUint::one();
        for (i, &m) in self.multiplicities().iter().enumerate().skip(1) {
            for j in 1..=m {
                z *= BigUint::from(i as u64);
                z *= BigUint::from(j as u64);
            }
        }
        z
    }

    /// Size of the conjugacy class C_λ in S(|λ|).
    pub fn class_size(&self) -> BigUint {
        factorial(self.size()) / self.z_order()
    }

    /// Parity (−1)^{d−ℓ(λ)} of the permutations of cycle type λ.
    pub fn sign(&self) -> i64 {
        if (self.size() as usize - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=cols)
                .map(|j| self.0.iter().take_while(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// Contents j − i of the cells (row i, column j, 1-indexed), row by row.
    pub fn contents(&self) -> ContentMultiset {
        let values = self
            .0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as i64).map(move |j| j - (i as i64 + 1)))
            .collect();
        ContentMultiset { values }
    }

    /// Hook lengths of all cells, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - j as u32 - 1;
                let leg = conj.0[j] - i as u32 - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// dim V^λ by the hook-length formula.
    pub fn dimension(&self) -> BigUint {
        let prod: BigUint = self.hook_lengths().into_iter().map(BigUint::from).product();
        factorial(self.size()) / prod
    }

    /// Parts of both partitions merged into weakly decreasing order.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend_from_slice(&self.0);
        parts.extend_from_slice(&other.0);
        Partition::from_unsorted(parts)
    }

    /// Appends `d − |λ|` unicellular rows.
    pub fn pad_with_ones(&self, d: u32) -> Result<Partition> {
        let size = self.size();
        if d < size {
            return Err(Error::SizeMismatch(format!(
                "cannot pad {self} (size {size}) down to {d}"
            )));
        }
        let mut parts = self.0.clone();
        parts.extend(std::iter::repeat_n(1, (d - size) as usize));
        Ok(Partition(parts))
    }

    /// Every partition of `d` in reverse lexicographic order:
    /// `(d)` first, `(1^d)` last. `d = 0` yields the empty partition.
    pub fn all(d: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fill_partitions(d, d, &mut current, &mut out);
        out
    }

    /// Every partition of `d` into exactly `len` parts, in reverse lexicographic order.
    pub fn with_length(d: u32, len: usize) -> Vec<Partition> {
        Partition::all(d)
            .into_iter()
            .filter(|p| p.len() == len)
            .collect()
    }
}

fn fill_partitions(rest: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        current.push(part);
        fill_partitions(rest - part, part, current, out);
        current.pop();
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses comma-separated parts such as `3,1,1`. An empty string or `0`
/// is the empty partition. Parts must already be weakly decreasing.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidPartition(format!("bad part {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// The multiset of cell contents c(□) of a Young diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentMultiset {
    values: Vec<i64>,
}

impl ContentMultiset {
    pub fn from_values(values: Vec<i64>) -> Self {
        ContentMultiset { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// p_j(c_1, c_2, …) = Σ c^j.
    pub fn power_sum(&self, j: u32) -> BigInt {
        self.values.iter().map(|&c| BigInt::from(c).pow(j)).sum()
    }

    /// Every content shifted by `n` (the contents seen by y_{c+n}).
    pub fn shifted(&self, n: i64) -> ContentMultiset {
        ContentMultiset {
            values: self.values.iter().map(|c| c + n).collect(),
        }
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}
