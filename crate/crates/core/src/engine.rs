//! Mixed double Hurwitz numbers W^{k,l}(α,β) and H^{k,l}(α,β).
//!
//! * `w_char`: W = d!/(z_α z_β) · Σ_λ χ^λ_α h_{(k,1^l)}(Cont_λ) χ^λ_β.
//! * `h_connected`: H read off the logarithm of the generating series
//!   1 + Σ z^d/d! Σ t^k u^l/l! W^{k,l}(α,β) p_α(A) p_β(B), scaled by l!.
//! * `h_char`: the same character sum divided by d!, valid off the walls.
//! * `reconstruct_w_from_h`: the exponential formula run forwards from the
//!   connected numbers, as an independent check of the combinatorial weights.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::characters::{character_column, CharacterTable, TableCache, DEFAULT_MAX_TABLE_D};
use crate::content::{ContentEvaluator, RegularFunction};
use crate::error::{Error, Result};
use crate::partitions::{factorial, Partition};
use crate::series::{SeriesKey, TruncatedSeries, Truncation};
use crate::toda::{build_tau, PowerSumProfile, TauOptions};
use crate::walks::{count_walks, WalkLimits};

/// (k, l, α, β) with |α| = |β|.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HurwitzQuery {
    pub k: u32,
    pub l: u32,
    alpha: Partition,
    beta: Partition,
}

impl HurwitzQuery {
    pub fn new(k: u32, l: u32, alpha: Partition, beta: Partition) -> Result<Self> {
        if alpha.size() != beta.size() {
            return Err(Error::SizeMismatch(format!(
                "|alpha| = {} but |beta| = {}",
                alpha.size(),
                beta.size()
            )));
        }
        Ok(HurwitzQuery { k, l, alpha, beta })
    }

    /// Pads the smaller diagram with unicellular rows.
    pub fn padded(k: u32, l: u32, alpha: Partition, beta: Partition) -> Result<Self> {
        let d = alpha.size().max(beta.size());
        Self::new(k, l, alpha.pad_with_ones(d)?, beta.pad_with_ones(d)?)
    }

    pub fn d(&self) -> u32 {
        self.alpha.size()
    }

    pub fn alpha(&self) -> &Partition {
        &self.alpha
    }

    pub fn beta(&self) -> &Partition {
        &self.beta
    }
}

/// Which computation produced a [`HurwitzValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Char,
    Series,
    Oracle,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "char" => Ok(Method::Char),
            "series" => Ok(Method::Series),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

fn as_string<T: ToString, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One evaluated query, in the JSON shape emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzValue {
    pub d: u32,
    pub k: u32,
    pub l: u32,
    pub alpha: Partition,
    pub beta: Partition,
    #[serde(rename = "W", serialize_with = "as_string")]
    pub w: BigInt,
    #[serde(rename = "H", serialize_with = "as_string")]
    pub h: BigRational,
    pub on_wall: bool,
    pub method: Method,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Largest d for full character tables; larger d use sparse columns.
    pub max_table_d: u32,
    /// Largest z-degree of the generating series used for H.
    pub max_series_d: u32,
    pub max_k: u32,
    pub max_l: u32,
    pub walk_limits: WalkLimits,
    pub cache_dir: Option<PathBuf>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_table_d: DEFAULT_MAX_TABLE_D,
            max_series_d: 8,
            max_k: 6,
            max_l: 6,
            walk_limits: WalkLimits::default(),
            cache_dir: None,
        }
    }
}

type Column = Arc<BTreeMap<Partition, i64>>;

/// Shared state: character tables, sparse columns, connected series.
/// All caches are behind mutexes, so one engine may serve many threads.
pub struct HurwitzEngine {
    config: EngineConfig,
    tables: Mutex<HashMap<u32, Arc<CharacterTable>>>,
    columns: Mutex<HashMap<Partition, Column>>,
    connected: Mutex<Vec<Arc<TruncatedSeries>>>,
}

impl Default for HurwitzEngine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl HurwitzEngine {
    pub fn new(config: EngineConfig) -> Self {
        HurwitzEngine {
            config,
            tables: Mutex::new(HashMap::new()),
            columns: Mutex::new(HashMap::new()),
            connected: Mutex::new(Vec::new()),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn character_table(&self, d: u32) -> Result<Arc<CharacterTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(&d) {
            return Ok(t.clone());
        }
        let table = match &self.config.cache_dir {
            Some(dir) => TableCache::new(dir).get_or_compute(d, self.config.max_table_d)?,
            None => CharacterTable::compute(d, self.config.max_table_d)?,
        };
        let table = Arc::new(table);
        self.tables.lock().unwrap().insert(d, table.clone());
        Ok(table)
    }

    fn column(&self, mu: &Partition) -> Result<Column> {
        if let Some(c) = self.columns.lock().unwrap().get(mu) {
            return Ok(c.clone());
        }
        let col = Arc::new(character_column(mu)?);
        self.columns.lock().unwrap().insert(mu.clone(), col.clone());
        Ok(col)
    }

    /// (λ, χ^λ_α χ^λ_β) for every λ where the product is nonzero.
    fn character_products(
        &self,
        alpha: &Partition,
        beta: &Partition,
    ) -> Result<Vec<(Partition, i64)>> {
        let d = alpha.size();
        if d != beta.size() {
            return Err(Error::SizeMismatch(format!("{alpha} and {beta}")));
        }
        if d <= self.config.max_table_d {
            let table = self.character_table(d)?;
            let (ia, ib) = (
                table.index_of(alpha).unwrap(),
                table.index_of(beta).unwrap(),
            );
            return Ok(table
                .order()
                .iter()
                .zip(table.entries())
                .filter_map(|(lambda, row)| {
                    let v = row[ia] * row[ib];
                    (v != 0).then(|| (lambda.clone(), v))
                })
                .collect());
        }
        let (ca, cb) = (self.column(alpha)?, self.column(beta)?);
        let mut out = Vec::new();
        for (lambda, &x) in ca.iter() {
            if let Some(&y) = cb.get(lambda) {
                let v = x
                    .checked_mul(y)
                    .ok_or(Error::Overflow("character product"))?;
                out.push((lambda.clone(), v));
            }
        }
        Ok(out)
    }

    /// S^f(α,β) = (1/z_α z_β) Σ_λ χ^λ_α f(λ) χ^λ_β, padding the smaller
    /// diagram with unicellular rows.
    pub fn s_transform(
        &self,
        f: &RegularFunction,
        alpha: &Partition,
        beta: &Partition,
    ) -> Result<BigRational> {
        self.s_transform_with(alpha, beta, |lambda| f.eval(lambda))
    }

    fn s_transform_with(
        &self,
        alpha: &Partition,
        beta: &Partition,
        mut f: impl FnMut(&Partition) -> BigRational,
    ) -> Result<BigRational> {
        let d = alpha.size().max(beta.size());
        let (alpha, beta) = (alpha.pad_with_ones(d)?, beta.pad_with_ones(d)?);
        let mut total = BigRational::zero();
        for (lambda, chi) in self.character_products(&alpha, &beta)? {
            total += f(&lambda) * BigInt::from(chi);
        }
        let z: BigUint = alpha.z_order() * beta.z_order();
        Ok(total / BigRational::from_integer(z.into()))
    }

    fn hook_transform(&self, q: &HurwitzQuery) -> Result<BigRational> {
        let (k, l) = (q.k, q.l);
        self.s_transform_with(q.alpha(), q.beta(), |lambda| {
            let mut ev = ContentEvaluator::for_partition(lambda);
            let h1 = BigRational::from_integer(ev.power_sum(1).clone());
            ev.complete(k) * num_traits::pow(h1, l as usize)
        })
    }

    /// W^{k,l}(α,β) by the character formula. Integrality is checked.
    pub fn w_char(&self, q: &HurwitzQuery) -> Result<BigInt> {
        if q.d() == 0 {
            return Err(Error::SizeMismatch("W needs d >= 1".into()));
        }
        let w = self.hook_transform(q)? * BigRational::from_integer(factorial(q.d()).into());
        if !w.is_integer() {
            return Err(Error::Consistency(format!(
                "character formula gave non-integral W = {w} for {q:?}"
            )));
        }
        Ok(w.to_integer())
    }

    /// H^{k,l}(α,β) by the character formula; refuses points on a wall.
    pub fn h_char(&self, q: &HurwitzQuery) -> Result<BigRational> {
        if let Some((i, j)) = find_wall(q.alpha(), q.beta())? {
            return Err(Error::OnWall {
                alpha: q.alpha().to_string(),
                beta: q.beta().to_string(),
                i,
                j,
            });
        }
        self.hook_transform(q)
    }

    fn check_series_limits(&self, trunc: &Truncation) -> Result<()> {
        let checks = [
            ("series degree d", trunc.z, self.config.max_series_d),
            ("monotone steps k", trunc.t, self.config.max_k),
            ("free steps l", trunc.u, self.config.max_l),
        ];
        for (what, value, cap) in checks {
            if value > cap {
                return Err(Error::LimitExceeded {
                    what,
                    value: value as usize,
                    cap: cap as usize,
                });
            }
        }
        Ok(())
    }

    /// 1 + Σ_{d ≤ Dz} z^d/d! Σ_{k ≤ Dt, l ≤ Du} t^k u^l/l! Σ_{α,β} W^{k,l}(α,β) p_α(A) p_β(B),
    /// assembled from the character formula.
    pub fn w_series(&self, trunc: Truncation) -> Result<TruncatedSeries> {
        self.check_series_limits(&trunc)?;
        let mut series = TruncatedSeries::one(trunc);
        for d in 1..=trunc.z {
            let parts = Partition::all(d);
            let table = self.character_table(d)?;
            // h_k(Cont_λ) p_1(Cont_λ)^l for every λ, k, l
            let hooks: Vec<Vec<Vec<BigRational>>> = table
                .order()
                .iter()
                .map(|lambda| {
                    let mut ev = ContentEvaluator::for_partition(lambda);
                    let h1 = BigRational::from_integer(ev.power_sum(1).clone());
                    (0..=trunc.t)
                        .map(|k| {
                            let hk = ev.complete(k);
                            (0..=trunc.u)
                                .map(|l| &hk * num_traits::pow(h1.clone(), l as usize))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            for (ia, alpha) in parts.iter().enumerate() {
                for (ib, beta) in parts.iter().enumerate() {
                    let z = BigRational::from_integer((alpha.z_order() * beta.z_order()).into());
                    for k in 0..=trunc.t {
                        for l in 0..=trunc.u {
                            let mut s = BigRational::zero();
                            for (i, row) in table.entries().iter().enumerate() {
                                let chi = row[ia] * row[ib];
                                if chi != 0 {
                                    s += &hooks[i][k as usize][l as usize] * BigInt::from(chi);
                                }
                            }
                            // W/(d! l!) = S/l!
                            let coeff = s / &z / BigRational::from_integer(factorial(l).into());
                            series.add_term(SeriesKey::new(d, k, l, alpha, beta)?, coeff);
                        }
                    }
                }
            }
        }
        Ok(series)
    }

    /// log of [`Self::w_series`], cached; any cached series with a larger
    /// truncation is reused.
    pub fn connected_series(&self, trunc: Truncation) -> Result<Arc<TruncatedSeries>> {
        self.check_series_limits(&trunc)?;
        if let Some(s) = self
            .connected
            .lock()
            .unwrap()
            .iter()
            .find(|s| s.truncation().dominates(&trunc))
        {
            return Ok(s.clone());
        }
        let log = Arc::new(self.w_series(trunc)?.log()?);
        self.connected.lock().unwrap().push(log.clone());
        Ok(log)
    }

    /// Precomputes the connected series up to the given truncation.
    pub fn warm_connected(&self, trunc: Truncation) -> Result<()> {
        self.connected_series(trunc).map(|_| ())
    }

    /// H^{k,l}(α,β) = l! · [z^d t^k u^l p_α(A) p_β(B)] log W.
    pub fn h_connected(&self, q: &HurwitzQuery) -> Result<BigRational> {
        let series = self.connected_series(Truncation::new(q.d(), q.k, q.l))?;
        connected_coefficient(&series, q.d(), q.k, q.l, q.alpha(), q.beta())
    }

    /// W^{k,l}(α,β) rebuilt from connected numbers by the exponential formula:
    /// W = Σ_θ c_θ Σ_{(ζ^j),(η^j)} Σ_{k_1+…=k, l_1+…=l} (l!/Π l_j!) Π_j H^{k_j,l_j}(ζ^j,η^j).
    pub fn reconstruct_w_from_h(&self, q: &HurwitzQuery) -> Result<BigInt> {
        let d = q.d();
        let series = self.connected_series(Truncation::new(d, q.k, q.l))?;
        let mut memo: HashMap<(u32, u32, Partition, Partition), BigRational> = HashMap::new();
        let mut h = |k: u32, l: u32, zeta: &Partition, eta: &Partition| -> Result<BigRational> {
            let key = (k, l, zeta.clone(), eta.clone());
            if let Some(v) = memo.get(&key) {
                return Ok(v.clone());
            }
            let v = connected_coefficient(&series, zeta.size(), k, l, zeta, eta)?;
            memo.insert(key, v.clone());
            Ok(v)
        };
        let mut total = BigRational::zero();
        for theta in Partition::all(d) {
            let inner = glue_sum(
                theta.parts(),
                q.alpha().parts().to_vec(),
                q.beta().parts().to_vec(),
                q.k,
                q.l,
                &mut h,
            )?;
            if !inner.is_zero() {
                total += inner * BigRational::from_integer(c_theta(&theta).into());
            }
        }
        total *= BigRational::from_integer(factorial(q.l).into());
        if !total.is_integer() {
            return Err(Error::Consistency(format!(
                "exponential formula gave non-integral W = {total} for {q:?}"
            )));
        }
        Ok(total.to_integer())
    }

    /// W and H for one query by the chosen method.
    pub fn evaluate(&self, q: &HurwitzQuery, method: Method) -> Result<HurwitzValue> {
        let on_wall = is_on_wall(q.alpha(), q.beta())?;
        let (w, h) = match method {
            Method::Char => {
                let w = self.w_char(q)?;
                let h = if on_wall {
                    self.h_connected(q)?
                } else {
                    self.h_char(q)?
                };
                (w, h)
            }
            Method::Series => {
                self.check_series_limits(&Truncation::new(q.d(), q.k, q.l))?;
                let options = TauOptions {
                    profile: PowerSumProfile::Full,
                    max_dz: self.config.max_series_d,
                };
                let tau = build_tau(0, Truncation::new(q.d(), q.k, q.l), options)?;
                let scale = BigRational::from_integer((factorial(q.d()) * factorial(q.l)).into());
                let w = tau.coeff_of(q.d(), q.k, q.l, q.alpha(), q.beta())? * scale;
                if !w.is_integer() {
                    return Err(Error::Consistency(format!("tau series gave W = {w}")));
                }
                let h = connected_coefficient(&tau.log()?, q.d(), q.k, q.l, q.alpha(), q.beta())?;
                (w.to_integer(), h)
            }
            Method::Oracle => (
                count_walks(q, self.config.walk_limits)?,
                self.h_connected(q)?,
            ),
        };
        Ok(HurwitzValue {
            d: q.d(),
            k: q.k,
            l: q.l,
            alpha: q.alpha().clone(),
            beta: q.beta().clone(),
            w,
            h,
            on_wall,
            method,
        })
    }
}

/// l! · [z^d t^k u^l p_α(A) p_β(B)] of a series in the W/H normalization.
pub fn connected_coefficient(
    series: &TruncatedSeries,
    d: u32,
    k: u32,
    l: u32,
    alpha: &Partition,
    beta: &Partition,
) -> Result<BigRational> {
    Ok(series.coeff_of(d, k, l, alpha, beta)? * BigRational::from_integer(factorial(l).into()))
}

/// Sum over assignments of θ's parts (in order) to sub-multisets of α and β
/// and compositions of (k, l), weighted by 1/Π l_j!.
fn glue_sum(
    theta: &[u32],
    alpha: Vec<u32>,
    beta: Vec<u32>,
    k: u32,
    l: u32,
    h: &mut impl FnMut(u32, u32, &Partition, &Partition) -> Result<BigRational>,
) -> Result<BigRational> {
    let Some((&size, rest)) = theta.split_first() else {
        let done = alpha.is_empty() && beta.is_empty() && k == 0 && l == 0;
        return Ok(if done {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    };
    let mut total = BigRational::zero();
    for (zeta, alpha_rest) in sub_multisets(&alpha, size) {
        for (eta, beta_rest) in sub_multisets(&beta, size) {
            let (kr, lr) = if rest.is_empty() {
                (k..=k, l..=l)
            } else {
                (0..=k, 0..=l)
            };
            for kj in kr {
                for lj in lr.clone() {
                    let hv = h(kj, lj, &zeta, &eta)?;
                    if hv.is_zero() {
                        continue;
                    }
                    let tail = glue_sum(
                        rest,
                        alpha_rest.clone(),
                        beta_rest.clone(),
                        k - kj,
                        l - lj,
                        h,
                    )?;
                    if tail.is_zero() {
                        continue;
                    }
                    total += hv * tail / BigRational::from_integer(factorial(lj).into());
                }
            }
        }
    }
    Ok(total)
}

/// Every distinct sub-multiset of `parts` (weakly decreasing) with the given
/// sum, paired with what remains.
fn sub_multisets(parts: &[u32], sum: u32) -> Vec<(Partition, Vec<u32>)> {
    let mut distinct: Vec<(u32, u32)> = Vec::new();
    for &p in parts {
        match distinct.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => distinct.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut chosen = vec![0u32; distinct.len()];
    fn go(
        i: usize,
        remaining: u32,
        distinct: &[(u32, u32)],
        chosen: &mut Vec<u32>,
        out: &mut Vec<(Partition, Vec<u32>)>,
    ) {
        if i == distinct.len() {
            if remaining == 0 {
                let mut taken = Vec::new();
                let mut left = Vec::new();
                for (&(v, m), &c) in distinct.iter().zip(chosen.iter()) {
                    taken.extend(std::iter::repeat_n(v, c as usize));
                    left.extend(std::iter::repeat_n(v, (m - c) as usize));
                }
                out.push((Partition::new(taken).expect("sorted"), left));
            }
            return;
        }
        let (v, m) = distinct[i];
        for c in 0..=m.min(remaining / v) {
            chosen[i] = c;
            go(i + 1, remaining - c * v, distinct, chosen, out);
        }
        chosen[i] = 0;
    }
    go(0, sum, &distinct, &mut chosen, &mut out);
    out
}

/// c_θ = |f⁻¹(θ)| · Π θ_i! = d!/Π_i m_i(θ)!.
pub fn c_theta(theta: &Partition) -> BigUint {
    let denom: BigUint = theta
        .multiplicities()
        .iter()
        .map(|&m| factorial(m))
        .product();
    factorial(theta.size()) / denom
}

/// Number of set partitions of {1..d} whose block sizes form θ.
pub fn set_partitions_of_type(theta: &Partition) -> BigUint {
    let blocks: BigUint = theta.parts().iter().map(|&p| factorial(p)).product();
    c_theta(theta) / blocks
}

/// The first wall (I, J) (1-indexed, proper nonempty) with Σ_I α_i = Σ_J β_j,
/// scanning I then J in increasing bitmask order.
pub fn find_wall(alpha: &Partition, beta: &Partition) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if alpha.size() != beta.size() {
        return Err(Error::SizeMismatch(format!(
            "wall test needs |alpha| = |beta|, got {} and {}",
            alpha.size(),
            beta.size()
        )));
    }
    let (m, n) = (alpha.len(), beta.len());
    if m < 2 || n < 2 {
        return Ok(None);
    }
    if m > 20 || n > 20 {
        return Err(Error::LimitExceeded {
            what: "number of parts for wall search",
            value: m.max(n),
            cap: 20,
        });
    }
    let subset_sum = |parts: &[u32], mask: u32| -> u64 {
        (0..parts.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| parts[i] as u64)
            .sum()
    };
    let mut by_sum: BTreeMap<u64, u32> = BTreeMap::new();
    for mask in 1..(1u32 << n) - 1 {
        by_sum.entry(subset_sum(beta.parts(), mask)).or_insert(mask);
    }
    let indices = |mask: u32, len: usize| -> Vec<usize> {
        (0..len)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    };
    for mask in 1..(1u32 << m) - 1 {
        if let Some(&jm) = by_sum.get(&subset_sum(alpha.parts(), mask)) {
            return Ok(Some((indices(mask, m), indices(jm, n))));
        }
    }
    Ok(None)
}

pub fn is_on_wall(alpha: &Partition, beta: &Partition) -> Result<bool> {
    Ok(find_wall(alpha, beta)?.is_some())
}

/// g = (l + 2 − ℓ(α) − ℓ(β))/2; the caller checks integrality and sign.
pub fn genus_classical(l: i64, len_alpha: i64, len_beta: i64) -> BigRational {
    BigRational::new(BigInt::from(l + 2 - len_alpha - len_beta), BigInt::from(2))
}

/// True when no walk can exist because each transposition flips the sign.
pub fn parity_vanishes(q: &HurwitzQuery) -> bool {
    let steps = (q.k + q.l) % 2;
    let needed = (2 * q.d() as usize - q.alpha().len() - q.beta().len()) % 2;
    steps as usize != needed
}
