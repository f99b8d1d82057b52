//! Irreducible characters χ^λ_μ of the symmetric group.
//!
//! Full tables come from the Murnaghan–Nakayama rule applied as border-strip
//! removal, memoized on (remaining shape, remaining class parts). Single
//! columns for large `d` are built the other way round, by adding border
//! strips to the empty diagram, which only ever visits shapes with a
//! nonzero character.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Default cap on `d` for full character tables.
pub const DEFAULT_MAX_TABLE_D: u32 = 10;

const CACHE_FORMAT_VERSION: u32 = 1;

/// χ^λ_μ as a plain integer.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "character of {lambda} on class {mu}: sizes {} and {} differ",
            lambda.size(),
            mu.size()
        )));
    }
    let mut memo = HashMap::new();
    mn_remove(lambda.parts(), mu.parts(), &mut memo)
}

/// (−1)^{d−ℓ(μ)}.
pub fn sign_of_class(mu: &Partition) -> i64 {
    mu.sign()
}

type Memo = HashMap<(Vec<u32>, Vec<u32>), i64>;

fn mn_remove(shape: &[u32], classes: &[u32], memo: &mut Memo) -> Result<i64> {
    let Some((&r, rest)) = classes.split_first() else {
        return Ok(if shape.is_empty() { 1 } else { 0 });
    };
    let key = (shape.to_vec(), classes.to_vec());
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let mut total: i64 = 0;
    for (smaller, sign) in remove_border_strips(shape, r) {
        let v = mn_remove(&smaller, rest, memo)?;
        total = total
            .checked_add(sign * v)
            .ok_or(Error::Overflow("character recursion"))?;
    }
    memo.insert(key, total);
    Ok(total)
}

fn to_beta(shape: &[u32], len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| shape.get(i).copied().unwrap_or(0) + (len - 1 - i) as u32)
        .collect()
}

fn from_beta(mut beta: Vec<u32>) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (len - 1 - i) as u32)
        .filter(|&p| p > 0)
        .collect()
}

/// All shapes obtained by removing a border strip of length `r`, with the
/// strip sign (−1)^{height}.
fn remove_border_strips(shape: &[u32], r: u32) -> Vec<(Vec<u32>, i64)> {
    let beta = to_beta(shape, shape.len());
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        out.push((from_beta(next), if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// All shapes obtained by adding a border strip of length `r`.
fn add_border_strips(shape: &[u32], r: u32) -> Vec<(Vec<u32>, i64)> {
    let beta = to_beta(shape, shape.len() + r as usize);
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        let target = b + r;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b && x < target).count();
        let mut next = beta.clone();
        next[i] = target;
        out.push((from_beta(next), if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// The nonzero entries of the column λ ↦ χ^λ_μ, built by adding border
/// strips of lengths μ_ℓ, …, μ_1 to the empty diagram.
pub fn character_column(mu: &Partition) -> Result<BTreeMap<Partition, i64>> {
    let mut layer: HashMap<Vec<u32>, i64> = HashMap::from([(Vec::new(), 1)]);
    for &r in mu.parts().iter().rev() {
        let mut next: HashMap<Vec<u32>, i64> = HashMap::new();
        for (shape, coeff) in &layer {
            for (bigger, sign) in add_border_strips(shape, r) {
                let slot = next.entry(bigger).or_insert(0);
                *slot = slot
                    .checked_add(sign * coeff)
                    .ok_or(Error::Overflow("character column"))?;
            }
        }
        next.retain(|_, v| *v != 0);
        layer = next;
    }
    Ok(layer
        .into_iter()
        .map(|(shape, v)| {
            (
                Partition::new(shape).expect("strip addition keeps shapes valid"),
                v,
            )
        })
        .collect())
}

/// The full table χ^λ_μ for all λ, μ ⊢ d, rows and columns in
/// reverse lexicographic partition order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    d: u32,
    order: Vec<Partition>,
    entries: Vec<Vec<i64>>,
    index: HashMap<Partition, usize>,
}

impl CharacterTable {
    /// Builds the table for `1 <= d <= max_d`.
    pub fn compute(d: u32, max_d: u32) -> Result<Self> {
        if d > max_d {
            return Err(Error::LimitExceeded {
                what: "character table d",
                value: d as usize,
                cap: max_d as usize,
            });
        }
        let order = Partition::all(d);
        let mut memo = HashMap::new();
        let mut entries = vec![vec![0i64; order.len()]; order.len()];
        for (j, mu) in order.iter().enumerate() {
            for (i, lambda) in order.iter().enumerate() {
                entries[i][j] = mn_remove(lambda.parts(), mu.parts(), &mut memo)?;
            }
        }
        Ok(Self::from_parts(d, order, entries))
    }

    fn from_parts(d: u32, order: Vec<Partition>, entries: Vec<Vec<i64>>) -> Self {
        let index = order
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        CharacterTable {
            d,
            order,
            entries,
            index,
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> &[Partition] {
        &self.order
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        match (self.index_of(lambda), self.index_of(mu)) {
            (Some(i), Some(j)) => Ok(self.entries[i][j]),
            _ => Err(Error::SizeMismatch(format!(
                "({lambda}, {mu}) not indexed by the table for d = {}",
                self.d
            ))),
        }
    }

    /// Σ_μ χ^λ_μ χ^{λ'}_μ / z_μ = δ_{λλ'}.
    pub fn row_orthogonality_holds(&self) -> bool {
        let inv_z: Vec<BigRational> = self
            .order
            .iter()
            .map(|mu| BigRational::new(BigInt::one(), mu.z_order().into()))
            .collect();
        let n = self.order.len();
        for a in 0..n {
            for b in a..n {
                let mut s = BigRational::zero();
                for (j, w) in inv_z.iter().enumerate() {
                    s += w * BigInt::from(self.entries[a][j] * self.entries[b][j]);
                }
                let expected = if a == b {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                if s != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Σ_λ χ^λ_α χ^λ_β = z_α δ_{αβ}.
    pub fn column_orthogonality_holds(&self) -> bool {
        let n = self.order.len();
        for a in 0..n {
            let z = BigInt::from(self.order[a].z_order());
            for b in a..n {
                let s: BigInt = (0..n)
                    .map(|i| BigInt::from(self.entries[i][a]) * self.entries[i][b])
                    .sum();
                let expected = if a == b { z.clone() } else { BigInt::zero() };
                if s != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Column (1^d) against hook-length dimensions.
    fn dimensions_agree(&self) -> bool {
        let Some(j) = self.index_of(&Partition::column(self.d)) else {
            return false;
        };
        self.order
            .iter()
            .enumerate()
            .all(|(i, lambda)| lambda.dimension().to_i64() == Some(self.entries[i][j]))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    d: u32,
    order: Vec<Partition>,
    entries: Vec<Vec<i64>>,
}

/// On-disk character-table cache: one JSON file per `d`.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, d: u32) -> PathBuf {
        self.dir.join(format!("character-table-d{d}.json"))
    }

    /// Returns the cached table only if it parses and passes every structural
    /// and orthogonality check; anything else is treated as a cache miss.
    pub fn load(&self, d: u32) -> Option<CharacterTable> {
        let text = fs::read_to_string(self.path_for(d)).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        if file.version != CACHE_FORMAT_VERSION || file.d != d {
            return None;
        }
        if file.order != Partition::all(d) {
            return None;
        }
        let n = file.order.len();
        if file.entries.len() != n || file.entries.iter().any(|row| row.len() != n) {
            return None;
        }
        let table = CharacterTable::from_parts(d, file.order, file.entries);
        (table.dimensions_agree() && table.row_orthogonality_holds()).then_some(table)
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn store(&self, table: &CharacterTable) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            version: CACHE_FORMAT_VERSION,
            d: table.d,
            order: table.order.clone(),
            entries: table.entries.clone(),
        };
        let text = serde_json::to_string(&file).expect("cache file serializes");
        let tmp = self.dir.join(format!(
            ".character-table-d{}.{}.tmp",
            table.d,
            std::process::id()
        ));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.path_for(table.d))?;
        Ok(())
    }

    /// Cached table if valid, otherwise compute and (re)write it.
    pub fn get_or_compute(&self, d: u32, max_d: u32) -> Result<CharacterTable> {
        if d <= max_d {
            if let Some(table) = self.load(d) {
                return Ok(table);
            }
        }
        let table = CharacterTable::compute(d, max_d)?;
        self.store(&table)?;
        Ok(table)
    }
}
