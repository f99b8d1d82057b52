//! Sparse truncated power series in z, t, u and the power sums p_i(A),
//! p_i(B), with exact rational coefficients.
//!
//! A term is z^a t^b u^c p_μ(A) p_ν(B). Power-sum monomials are stored as
//! multiplicity vectors, so multiplying monomials is the partition union.
//! Keys with a > Dz, b > Dt or c > Du are dropped; no zero coefficient is
//! ever stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Largest power-sum index representable in a [`Monomial`].
pub const MAX_PART: usize = 16;

/// p_μ as the multiplicities of 1, 2, …, MAX_PART in μ.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([u8; MAX_PART]);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_partition(p: &Partition) -> Result<Self> {
        let mut m = [0u8; MAX_PART];
        for &part in p.parts() {
            let slot = m
                .get_mut(part as usize - 1)
                .ok_or_else(|| Error::Series(format!("power sum p_{part} exceeds p_{MAX_PART}")))?;
            *slot = slot
                .checked_add(1)
                .ok_or(Error::Overflow("power-sum multiplicity"))?;
        }
        Ok(Monomial(m))
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::new();
        for (i, &m) in self.0.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(i as u32 + 1, m as usize));
        }
        Partition::new(parts).expect("multiplicity vectors give valid partitions")
    }

    pub fn multiplicity(&self, part: usize) -> u8 {
        self.0.get(part - 1).copied().unwrap_or(0)
    }

    /// Σ i·m_i.
    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| (i as u32 + 1) * m as u32)
            .sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("power-sum multiplicity overflow");
        }
        Monomial(m)
    }

    /// Largest part present, 0 for the empty monomial.
    pub fn max_part(&self) -> usize {
        self.0.iter().rposition(|&m| m > 0).map_or(0, |i| i + 1)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_partition())
    }
}

/// Exponent key z^z t^t u^u p_a(A) p_b(B).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SeriesKey {
    pub z: u16,
    pub t: u16,
    pub u: u16,
    pub a: Monomial,
    pub b: Monomial,
}

impl SeriesKey {
    pub fn new(z: u32, t: u32, u: u32, a: &Partition, b: &Partition) -> Result<Self> {
        let narrow = |v: u32| u16::try_from(v).map_err(|_| Error::Overflow("series degree"));
        Ok(SeriesKey {
            z: narrow(z)?,
            t: narrow(t)?,
            u: narrow(u)?,
            a: Monomial::from_partition(a)?,
            b: Monomial::from_partition(b)?,
        })
    }

    pub fn constant() -> Self {
        SeriesKey {
            z: 0,
            t: 0,
            u: 0,
            a: Monomial::one(),
            b: Monomial::one(),
        }
    }

    fn times(&self, other: &SeriesKey) -> SeriesKey {
        SeriesKey {
            z: self.z + other.z,
            t: self.t + other.t,
            u: self.u + other.u,
            a: self.a.times(&other.a),
            b: self.b.times(&other.b),
        }
    }

    /// Total degree in z, t, u (the grading used by log and exp).
    fn grade(&self) -> usize {
        (self.z + self.t + self.u) as usize
    }

    pub(crate) fn sort_key(&self) -> (u16, u16, u16, Partition, Partition) {
        (
            self.z,
            self.t,
            self.u,
            self.a.to_partition(),
            self.b.to_partition(),
        )
    }
}

/// Maximal retained degrees in z, t and u (inclusive).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Truncation {
    pub z: u32,
    pub t: u32,
    pub u: u32,
}

impl Truncation {
    pub fn new(z: u32, t: u32, u: u32) -> Self {
        Truncation { z, t, u }
    }

    pub fn min(&self, other: &Truncation) -> Truncation {
        Truncation {
            z: self.z.min(other.z),
            t: self.t.min(other.t),
            u: self.u.min(other.u),
        }
    }

    pub fn dominates(&self, other: &Truncation) -> bool {
        self.z >= other.z && self.t >= other.t && self.u >= other.u
    }

    pub fn admits(&self, key: &SeriesKey) -> bool {
        key.z as u32 <= self.z && key.t as u32 <= self.t && key.u as u32 <= self.u
    }
}

/// Which side's power sum a derivative acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    trunc: Truncation,
    terms: HashMap<SeriesKey, BigRational>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms == other.terms
    }
}

impl TruncatedSeries {
    pub fn zero(trunc: Truncation) -> Self {
        TruncatedSeries {
            trunc,
            terms: HashMap::new(),
        }
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::monomial(trunc, SeriesKey::constant(), BigRational::one())
    }

    pub fn monomial(trunc: Truncation, key: SeriesKey, coeff: BigRational) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(key, coeff);
        s
    }

    /// The series for z^0 t^0 u^0 · p_a(A) p_b(B) etc. from raw parts.
    pub fn term(
        trunc: Truncation,
        (z, t, u): (u32, u32, u32),
        a: &Partition,
        b: &Partition,
        coeff: BigRational,
    ) -> Result<Self> {
        Ok(Self::monomial(trunc, SeriesKey::new(z, t, u, a, b)?, coeff))
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SeriesKey, &BigRational)> {
        self.terms.iter()
    }

    /// Adds `coeff` at `key`, ignoring keys beyond the truncation.
    pub fn add_term(&mut self, key: SeriesKey, coeff: BigRational) {
        if coeff.is_zero() || !self.trunc.admits(&key) {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn coeff(&self, key: &SeriesKey) -> BigRational {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff_of(
        &self,
        z: u32,
        t: u32,
        u: u32,
        a: &Partition,
        b: &Partition,
    ) -> Result<BigRational> {
        Ok(self.coeff(&SeriesKey::new(z, t, u, a, b)?))
    }

    /// Drops every term beyond `trunc` (which is min'ed with the current one).
    pub fn restrict(&self, trunc: Truncation) -> TruncatedSeries {
        let trunc = self.trunc.min(&trunc);
        TruncatedSeries {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| trunc.admits(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.restrict(other.trunc);
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> TruncatedSeries {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        TruncatedSeries {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let trunc = self.trunc.min(&other.trunc);
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut terms: HashMap<SeriesKey, BigRational> = HashMap::new();
        for (ka, va) in &small.terms {
            if !trunc.admits(ka) {
                continue;
            }
            for (kb, vb) in &large.terms {
                let z = ka.z as u32 + kb.z as u32;
                let t = ka.t as u32 + kb.t as u32;
                let u = ka.u as u32 + kb.u as u32;
                if z > trunc.z || t > trunc.t || u > trunc.u {
                    continue;
                }
                let key = ka.times(kb);
                let prod = va * vb;
                match terms.entry(key) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        TruncatedSeries { trunc, terms }
    }

    pub fn pow(&self, n: u32) -> TruncatedSeries {
        let mut acc = Self::one(self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Splits by total degree in (z, t, u).
    fn graded(&self) -> Vec<TruncatedSeries> {
        let top = (self.trunc.z + self.trunc.t + self.trunc.u) as usize;
        let mut pieces = vec![Self::zero(self.trunc); top + 1];
        for (k, v) in &self.terms {
            pieces[k.grade()].terms.insert(*k, v.clone());
        }
        pieces
    }

    fn from_graded(trunc: Truncation, pieces: Vec<TruncatedSeries>) -> TruncatedSeries {
        let mut terms = HashMap::new();
        for p in pieces {
            terms.extend(p.terms);
        }
        TruncatedSeries { trunc, terms }
    }

    /// log(a) for a with constant term 1 and no other term of (z, t, u)-degree 0.
    ///
    /// Uses the Euler-operator recurrence g·b_g = g·a_g − Σ_{j<g} j·b_j·a_{g−j}
    /// on the total-degree pieces, which equals the truncated Mercator series.
    pub fn log(&self) -> Result<TruncatedSeries> {
        if self.coeff(&SeriesKey::constant()) != BigRational::one() {
            return Err(Error::Series("log needs constant term exactly 1".into()));
        }
        let a = self.graded();
        if a[0].len() != 1 {
            return Err(Error::Series(
                "log needs every non-constant term to carry a positive power of z, t or u".into(),
            ));
        }
        let mut b: Vec<TruncatedSeries> = vec![Self::zero(self.trunc); a.len()];
        for g in 1..a.len() {
            let mut acc = a[g].scale(&BigRational::from_integer(BigInt::from(g)));
            for j in 1..g {
                if b[j].is_empty() || a[g - j].is_empty() {
                    continue;
                }
                let weight = BigRational::from_integer(BigInt::from(j));
                acc = acc.sub(&b[j].mul(&a[g - j]).scale(&weight));
            }
            b[g] = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(g)));
        }
        Ok(Self::from_graded(self.trunc, b))
    }

    /// exp(b) for b without (z, t, u)-degree-0 terms.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        let b = self.graded();
        if !b[0].is_empty() {
            return Err(Error::Series(
                "exp needs every term to carry a positive power of z, t or u".into(),
            ));
        }
        let mut e: Vec<TruncatedSeries> = vec![Self::zero(self.trunc); b.len()];
        e[0] = Self::one(self.trunc);
        for g in 1..b.len() {
            let mut acc = Self::zero(self.trunc);
            for j in 1..=g {
                if b[j].is_empty() || e[g - j].is_empty() {
                    continue;
                }
                let weight = BigRational::from_integer(BigInt::from(j));
                acc = acc.add(&b[j].mul(&e[g - j]).scale(&weight));
            }
            e[g] = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(g)));
        }
        Ok(Self::from_graded(self.trunc, e))
    }

    /// ∂/∂p_i on side A or B.
    pub fn derivative(&self, side: Side, i: usize) -> TruncatedSeries {
        let mut out = Self::zero(self.trunc);
        if i == 0 || i > MAX_PART {
            return out;
        }
        for (k, v) in &self.terms {
            let mono = match side {
                Side::A => k.a,
                Side::B => k.b,
            };
            let m = mono.0[i - 1];
            if m == 0 {
                continue;
            }
            let mut lowered = mono;
            lowered.0[i - 1] -= 1;
            let mut key = *k;
            match side {
                Side::A => key.a = lowered,
                Side::B => key.b = lowered,
            }
            out.add_term(key, v * BigRational::from_integer(BigInt::from(m)));
        }
        out
    }

    /// Substitutes z ↦ zs, t ↦ ts, u ↦ us. Each substitute must lie in the
    /// ideal of its own variable (every term of `zs` has positive z-degree,
    /// and likewise for t and u), so truncation is preserved.
    pub fn compose(
        &self,
        zs: &TruncatedSeries,
        ts: &TruncatedSeries,
        us: &TruncatedSeries,
    ) -> Result<TruncatedSeries> {
        if zs.terms.keys().any(|k| k.z == 0)
            || ts.terms.keys().any(|k| k.t == 0)
            || us.terms.keys().any(|k| k.u == 0)
        {
            return Err(Error::Series(
                "substitutes must be divisible by their own variable".into(),
            ));
        }
        let trunc = self.trunc.min(&zs.trunc).min(&ts.trunc).min(&us.trunc);
        let powers = |s: &TruncatedSeries, n: u32| {
            let mut out = vec![Self::one(trunc)];
            for i in 1..=n as usize {
                let next = out[i - 1].mul(s);
                out.push(next);
            }
            out
        };
        let zp = powers(zs, trunc.z);
        let tp = powers(ts, trunc.t);
        let up = powers(us, trunc.u);
        let mut by_degree: BTreeMap<(u16, u16, u16), TruncatedSeries> = BTreeMap::new();
        for (k, v) in &self.terms {
            if !trunc.admits(k) {
                continue;
            }
            let key = SeriesKey {
                z: 0,
                t: 0,
                u: 0,
                a: k.a,
                b: k.b,
            };
            by_degree
                .entry((k.z, k.t, k.u))
                .or_insert_with(|| Self::zero(trunc))
                .add_term(key, v.clone());
        }
        let mut out = Self::zero(trunc);
        for ((z, t, u), mono) in by_degree {
            let factor = zp[z as usize].mul(&tp[t as usize]).mul(&up[u as usize]);
            out = out.add(&factor.mul(&mono));
        }
        Ok(out)
    }

    /// Terms of exact z-degree `z`, as a series.
    pub fn z_component(&self, z: u32) -> TruncatedSeries {
        TruncatedSeries {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.z as u32 == z)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Keys in (z, t, u, A, B) order.
    pub fn sorted_keys(&self) -> Vec<SeriesKey> {
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_cached_key(SeriesKey::sort_key);
        keys
    }

    pub fn to_entries(&self) -> Vec<SeriesEntry> {
        self.sorted_keys()
            .into_iter()
            .map(|k| SeriesEntry {
                z: k.z as u32,
                t: k.t as u32,
                u: k.u as u32,
                a: k.a.to_partition(),
                b: k.b.to_partition(),
                coeff: self.terms[&k].to_string(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_entries()).expect("entries serialize")
    }

    pub fn from_entries(trunc: Truncation, entries: &[SeriesEntry]) -> Result<Self> {
        let mut s = Self::zero(trunc);
        for e in entries {
            let coeff: BigRational = e
                .coeff
                .parse()
                .map_err(|_| Error::Series(format!("bad coefficient {:?}", e.coeff)))?;
            s.add_term(SeriesKey::new(e.z, e.t, e.u, &e.a, &e.b)?, coeff);
        }
        Ok(s)
    }
}

/// One serialized term: `{z, t, u, A: [parts], B: [parts], coeff: "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub z: u32,
    pub t: u32,
    pub u: u32,
    #[serde(rename = "A")]
    pub a: Partition,
    #[serde(rename = "B")]
    pub b: Partition,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn tr(z: u32, t: u32, u: u32) -> Truncation {
        Truncation::new(z, t, u)
    }

    fn term(
        trunc: Truncation,
        z: u32,
        t: u32,
        u: u32,
        a: &str,
        b: &str,
        c: BigRational,
    ) -> TruncatedSeries {
        TruncatedSeries::term(trunc, (z, t, u), &p(a), &p(b), c).unwrap()
    }

    #[test]
    fn monomial_roundtrip() {
        for s in ["", "1", "3,1,1", "16,2,2"] {
            assert_eq!(
                Monomial::from_partition(&p(s)).unwrap().to_partition(),
                p(s)
            );
        }
        assert!(Monomial::from_partition(&p("17")).is_err());
        assert_eq!(Monomial::from_partition(&p("3,1,1")).unwrap().degree(), 5);
    }

    #[test]
    fn multiplication_basics() {
        let t = tr(3, 1, 1);
        let a = term(t, 1, 0, 0, "1", "", q(1, 1)).add(&term(t, 0, 1, 0, "", "2", q(2, 3)));
        assert_eq!(a.mul(&TruncatedSeries::one(t)), a);
        let x = term(t, 1, 0, 0, "1", "", q(1, 1));
        let sq = x.mul(&x);
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coeff_of(2, 0, 0, &p("1,1"), &p("")).unwrap(), q(1, 1));
        // truncation drops z^4
        assert!(sq.mul(&sq).is_zero());
    }

    #[test]
    fn mercator_example() {
        let t = tr(2, 0, 0);
        let a = TruncatedSeries::one(t).add(&term(t, 1, 0, 0, "1", "1", q(1, 1)));
        let l = a.log().unwrap();
        let expected =
            term(t, 1, 0, 0, "1", "1", q(1, 1)).add(&term(t, 2, 0, 0, "1,1", "1,1", q(-1, 2)));
        assert_eq!(l, expected);
        assert!(TruncatedSeries::one(t).log().unwrap().is_zero());
    }

    #[test]
    fn log_errors() {
        let t = tr(2, 1, 1);
        let two = TruncatedSeries::one(t).scale(&q(2, 1));
        assert!(two.log().is_err());
        let bad = TruncatedSeries::one(t).add(&term(t, 0, 0, 0, "1", "", q(1, 1)));
        assert!(bad.log().is_err());
        assert!(TruncatedSeries::one(t).exp().is_err());
    }

    #[test]
    fn log_of_geometric_in_t() {
        // log(1/(1 - t)) = Σ t^j / j
        let trunc = tr(0, 5, 0);
        let mut geo = TruncatedSeries::zero(trunc);
        for j in 0..=5 {
            geo.add_term(SeriesKey::new(0, j, 0, &p(""), &p("")).unwrap(), q(1, 1));
        }
        let l = geo.log().unwrap();
        for j in 1..=5 {
            assert_eq!(l.coeff_of(0, j, 0, &p(""), &p("")).unwrap(), q(1, j as i64));
        }
    }

    #[test]
    fn derivative_counts_multiplicity() {
        let t = tr(3, 0, 0);
        let s = term(t, 3, 0, 0, "1,1,1", "2,1", q(5, 1));
        let dx = s.derivative(Side::A, 1);
        assert_eq!(
            dx.coeff_of(3, 0, 0, &p("1,1"), &p("2,1")).unwrap(),
            q(15, 1)
        );
        let dy2 = s.derivative(Side::B, 2);
        assert_eq!(
            dy2.coeff_of(3, 0, 0, &p("1,1,1"), &p("1")).unwrap(),
            q(5, 1)
        );
        assert!(s.derivative(Side::A, 2).is_zero());
    }

    #[test]
    fn compose_geometric() {
        // 1/(1 - z) with z ↦ z + z²  gives Σ F_{n+1} z^n (Fibonacci).
        let trunc = tr(6, 0, 0);
        let mut geo = TruncatedSeries::zero(trunc);
        for j in 0..=6 {
            geo.add_term(SeriesKey::new(j, 0, 0, &p(""), &p("")).unwrap(), q(1, 1));
        }
        let zs = term(trunc, 1, 0, 0, "", "", q(1, 1)).add(&term(trunc, 2, 0, 0, "", "", q(1, 1)));
        let ts = TruncatedSeries::zero(trunc);
        let us = TruncatedSeries::zero(trunc);
        let out = geo.compose(&zs, &ts, &us).unwrap();
        let fib = [1, 1, 2, 3, 5, 8, 13];
        for (n, f) in fib.iter().enumerate() {
            assert_eq!(
                out.coeff_of(n as u32, 0, 0, &p(""), &p("")).unwrap(),
                q(*f, 1)
            );
        }
        assert!(geo.compose(&TruncatedSeries::one(trunc), &ts, &us).is_err());
    }

    #[test]
    fn json_is_sorted() {
        let t = tr(2, 1, 0);
        let s = term(t, 2, 0, 0, "1,1", "2", q(1, 3))
            .add(&term(t, 1, 1, 0, "1", "1", q(-2, 1)))
            .add(&TruncatedSeries::one(t));
        let entries = s.to_entries();
        assert_eq!(entries[0].z, 0);
        assert_eq!(entries[1].coeff, "-2");
        assert_eq!(entries[2].coeff, "1/3");
        let json = serde_json::to_string(&entries).unwrap();
        assert!(
            json.contains(r#""A":[1,1],"B":[2],"coeff":"1/3""#),
            "{json}"
        );
        let back = TruncatedSeries::from_entries(t, &entries).unwrap();
        assert_eq!(back, s);
    }

    fn arb_series(trunc: Truncation) -> impl Strategy<Value = TruncatedSeries> {
        let key = (
            0..=trunc.z,
            0..=trunc.t,
            0..=trunc.u,
            0u32..3,
            0u32..3,
            -4i64..5,
            1i64..4,
        );
        proptest::collection::vec(key, 0..6).prop_map(move |terms| {
            let mut s = TruncatedSeries::zero(trunc);
            for (z, t, u, a, b, n, d) in terms {
                let pa = Partition::column(a);
                let pb = Partition::row(b);
                s.add_term(SeriesKey::new(z, t, u, &pa, &pb).unwrap(), q(n, d));
            }
            s
        })
    }

    fn arb_unit(trunc: Truncation) -> impl Strategy<Value = TruncatedSeries> {
        arb_series(trunc).prop_map(move |s| {
            let mut s = s;
            s.terms.retain(|k, _| k.grade() > 0);
            s.add(&TruncatedSeries::one(trunc))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(a in arb_series(tr(2, 1, 1)), b in arb_series(tr(2, 1, 1)), c in arb_series(tr(2, 1, 1))) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn exp_log_inverse(a in arb_unit(tr(2, 1, 1))) {
            let l = a.log().unwrap();
            prop_assert_eq!(l.exp().unwrap(), a.clone());
            let b = a.sub(&TruncatedSeries::one(a.truncation()));
            prop_assert_eq!(b.exp().unwrap().log().unwrap(), b);
        }

        #[test]
        fn log_turns_products_into_sums(a in arb_unit(tr(2, 1, 1)), b in arb_unit(tr(2, 1, 1))) {
            let lhs = a.mul(&b).log().unwrap();
            let rhs = a.log().unwrap().add(&b.log().unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
