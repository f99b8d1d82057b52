//! Ground truth by brute force in the group algebra Q S(d).
//!
//! Permutations compose left to right: `a.then(b)` applies `a` first, so the
//! walk ρ(s₁ t₁)…(s_m t_m) is `rho.then(tau_1)…then(tau_m)`. Right
//! multiplication by a transposition swaps two values in one-line notation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::character;
use crate::content::{ContentEvaluator, Generator, RegularFunction};
use crate::engine::HurwitzQuery;
use crate::error::{Error, Result};
use crate::partitions::{factorial, Partition};

/// Hard cap on the degree of the symmetric groups handled here.
pub const MAX_ALGEBRA_D: u32 = 6;

/// A permutation of {1..d} in one-line notation (stored 0-indexed).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(d: u32) -> Self {
        Permutation((0..d as u8).collect())
    }

    /// The transposition (s t), 1-indexed.
    pub fn transposition(s: u32, t: u32, d: u32) -> Result<Self> {
        if s == t || s == 0 || t == 0 || s > d || t > d {
            return Err(Error::LimitExceeded {
                what: "transposition index",
                value: s.max(t) as usize,
                cap: d as usize,
            });
        }
        let mut p = Self::identity(d);
        p.0.swap(s as usize - 1, t as usize - 1);
        Ok(p)
    }

    /// From 1-indexed one-line notation.
    pub fn from_one_line(images: &[u32]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in images {
            if i == 0 || i as usize > d || seen[i as usize - 1] {
                return Err(Error::InvalidPartition(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i as usize - 1] = true;
        }
        Ok(Permutation(images.iter().map(|&i| (i - 1) as u8).collect()))
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    /// 1-indexed image of 1-indexed `i`.
    pub fn image(&self, i: u32) -> u32 {
        self.0[i as usize - 1] as u32 + 1
    }

    /// `self` followed by `other`: i ↦ other(self(i)).
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    /// Right multiplication by (s t), 1-indexed.
    pub fn then_swap(&self, s: u32, t: u32) -> Permutation {
        let (a, b) = ((s - 1) as u8, (t - 1) as u8);
        Permutation(
            self.0
                .iter()
                .map(|&x| {
                    if x == a {
                        b
                    } else if x == b {
                        a
                    } else {
                        x
                    }
                })
                .collect(),
        )
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn cycle_type(&self) -> Partition {
        let mut seen = vec![false; self.0.len()];
        let mut lengths = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_unsorted(lengths)
    }

    /// All permutations of {1..d} in lexicographic one-line order.
    pub fn all(d: u32) -> Vec<Permutation> {
        fn go(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i as u8);
                    go(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), &mut vec![false; d as usize], &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", images.join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of Q S(d), dense over the algebra's element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraVector {
    coeffs: Vec<BigRational>,
}

impl GroupAlgebraVector {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &GroupAlgebraVector) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scaled(&self, c: &BigRational) -> GroupAlgebraVector {
        GroupAlgebraVector {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }
}

/// Q S(d) for d ≤ 6, with precomputed right-multiplication tables for every
/// transposition.
pub struct GroupAlgebra {
    d: u32,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    cycle_types: Vec<Partition>,
    /// (s, t, table) with table[i] = index of elements[i]·(s t).
    transpositions: Vec<(u32, u32, Vec<usize>)>,
}

impl GroupAlgebra {
    pub fn new(d: u32) -> Result<Self> {
        if d > MAX_ALGEBRA_D {
            return Err(Error::LimitExceeded {
                what: "group algebra degree d",
                value: d as usize,
                cap: MAX_ALGEBRA_D as usize,
            });
        }
        let elements = Permutation::all(d);
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let cycle_types = elements.iter().map(Permutation::cycle_type).collect();
        let mut transpositions = Vec::new();
        for t in 2..=d {
            for s in 1..t {
                let table = elements.iter().map(|p| index[&p.then_swap(s, t)]).collect();
                transpositions.push((s, t, table));
            }
        }
        Ok(GroupAlgebra {
            d,
            elements,
            index,
            cycle_types,
            transpositions,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn zero(&self) -> GroupAlgebraVector {
        GroupAlgebraVector {
            coeffs: vec![BigRational::zero(); self.elements.len()],
        }
    }

    pub fn basis(&self, p: &Permutation) -> GroupAlgebraVector {
        let mut v = self.zero();
        v.coeffs[self.index[p]] = BigRational::one();
        v
    }

    pub fn identity(&self) -> GroupAlgebraVector {
        self.basis(&Permutation::identity(self.d))
    }

    pub fn coefficient(&self, v: &GroupAlgebraVector, p: &Permutation) -> BigRational {
        self.index
            .get(p)
            .map(|&i| v.coeffs[i].clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Σ_{σ ∈ C_μ} σ.
    pub fn class_sum(&self, mu: &Partition) -> Result<GroupAlgebraVector> {
        if mu.size() != self.d {
            return Err(Error::SizeMismatch(format!("class {mu} in S({})", self.d)));
        }
        let mut v = self.zero();
        for (i, ct) in self.cycle_types.iter().enumerate() {
            if ct == mu {
                v.coeffs[i] = BigRational::one();
            }
        }
        Ok(v)
    }

    /// Sum of the coefficients of `v` over the class C_μ.
    pub fn class_total(&self, v: &GroupAlgebraVector, mu: &Partition) -> BigRational {
        self.cycle_types
            .iter()
            .zip(&v.coeffs)
            .filter(|(ct, _)| *ct == mu)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// J_t = Σ_{s<t} (s t); J_1 = 0.
    pub fn jm_element(&self, t: u32) -> Result<GroupAlgebraVector> {
        if t == 0 || t > self.d {
            return Err(Error::LimitExceeded {
                what: "Jucys-Murphy index t",
                value: t as usize,
                cap: self.d as usize,
            });
        }
        let mut v = self.zero();
        let id = self.index[&Permutation::identity(self.d)];
        for (s, tt, table) in &self.transpositions {
            if *tt == t {
                debug_assert!(*s < t);
                v.coeffs[table[id]] += BigRational::one();
            }
        }
        Ok(v)
    }

    /// v · J_t.
    pub fn mul_jm(&self, v: &GroupAlgebraVector, t: u32) -> GroupAlgebraVector {
        self.mul_transpositions(v, |_, tt| tt == t)
    }

    /// v · Σ_t J_t, the sum of all transpositions.
    pub fn mul_all_transpositions(&self, v: &GroupAlgebraVector) -> GroupAlgebraVector {
        self.mul_transpositions(v, |_, _| true)
    }

    fn mul_transpositions(
        &self,
        v: &GroupAlgebraVector,
        keep: impl Fn(u32, u32) -> bool,
    ) -> GroupAlgebraVector {
        let mut out = self.zero();
        for (s, t, table) in &self.transpositions {
            if !keep(*s, *t) {
                continue;
            }
            for (i, c) in v.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.coeffs[table[i]] += c;
                }
            }
        }
        out
    }

    /// General product a·b.
    pub fn mul(&self, a: &GroupAlgebraVector, b: &GroupAlgebraVector) -> GroupAlgebraVector {
        let mut out = self.zero();
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let k = self.index[&self.elements[i].then(&self.elements[j])];
                out.coeffs[k] += ca * cb;
            }
        }
        out
    }

    /// h_k(Ξ_d) for k = 0..=max_k, via h_j(J_1..J_t) = h_j(J_1..J_{t−1}) + J_t h_{j−1}(J_1..J_t).
    pub fn complete_in_jm(&self, max_k: u32) -> Vec<GroupAlgebraVector> {
        let mut h = vec![self.zero(); max_k as usize + 1];
        h[0] = self.identity();
        for t in 2..=self.d {
            for j in 1..=max_k as usize {
                let step = self.mul_jm(&h[j - 1], t);
                h[j].add_assign(&step);
            }
        }
        h
    }

    /// e_r(Ξ_d) for r = 0..=max_r.
    pub fn elementary_in_jm(&self, max_r: u32) -> Vec<GroupAlgebraVector> {
        let mut e = vec![self.zero(); max_r as usize + 1];
        e[0] = self.identity();
        for t in 2..=self.d {
            for j in (1..=max_r as usize).rev() {
                let step = self.mul_jm(&e[j - 1], t);
                e[j].add_assign(&step);
            }
        }
        e
    }

    /// p_k(Ξ_d) = Σ_t J_t^k.
    pub fn power_sum_in_jm(&self, k: u32) -> GroupAlgebraVector {
        let mut total = self.zero();
        for t in 2..=self.d {
            let mut v = self.identity();
            for _ in 0..k {
                v = self.mul_jm(&v, t);
            }
            total.add_assign(&v);
        }
        total
    }

    /// f(Ξ_d) with SIZE ↦ d·1, evaluated entirely inside the group algebra.
    pub fn regular_in_jm(&self, f: &RegularFunction) -> GroupAlgebraVector {
        let max = f.max_index();
        let complete = self.complete_in_jm(max);
        let elementary = self.elementary_in_jm(max);
        let mut total = self.zero();
        for term in f.terms() {
            let mut v = self.identity().scaled(&term.coeff);
            for &(g, e) in &term.factors {
                let factor = match g {
                    Generator::Complete(k) => complete[k as usize].clone(),
                    Generator::Elementary(k) => elementary[k as usize].clone(),
                    Generator::PowerSum(k) => self.power_sum_in_jm(k),
                    Generator::Size => self
                        .identity()
                        .scaled(&BigRational::from_integer(BigInt::from(self.d))),
                };
                for _ in 0..e {
                    v = self.mul(&v, &factor);
                }
            }
            total.add_assign(&v);
        }
        total
    }

    /// Σ_λ f(Cont_λ) · (dim λ / d!) · Σ_σ χ^λ(σ) σ.
    ///
    /// Uses χ^λ(σ) rather than χ^λ(σ⁻¹); the two agree since σ and σ⁻¹ share
    /// a cycle type.
    pub fn regular_by_idempotents(&self, f: &RegularFunction) -> Result<GroupAlgebraVector> {
        let d_fact = BigRational::from_integer(factorial(self.d).into());
        let mut total = self.zero();
        for lambda in Partition::all(self.d) {
            let mut chi_by_class: BTreeMap<Partition, BigRational> = BTreeMap::new();
            for mu in Partition::all(self.d) {
                let chi = character(&lambda, &mu)?;
                chi_by_class.insert(mu, BigRational::from_integer(chi.into()));
            }
            let weight =
                f.eval(&lambda) * BigRational::from_integer(lambda.dimension().into()) / &d_fact;
            if weight.is_zero() {
                continue;
            }
            for (i, ct) in self.cycle_types.iter().enumerate() {
                total.coeffs[i] += &weight * &chi_by_class[ct];
            }
        }
        Ok(total)
    }
}

/// Size limits for walk enumeration.
#[derive(Clone, Copy, Debug)]
pub struct WalkLimits {
    pub max_d: u32,
    pub max_steps: u32,
}

impl Default for WalkLimits {
    fn default() -> Self {
        WalkLimits {
            max_d: MAX_ALGEBRA_D,
            max_steps: 5,
        }
    }
}

impl WalkLimits {
    fn check(&self, d: u32, steps: u32) -> Result<()> {
        let cap = self.max_d.min(MAX_ALGEBRA_D);
        if d > cap {
            return Err(Error::LimitExceeded {
                what: "walk degree d",
                value: d as usize,
                cap: cap as usize,
            });
        }
        if steps > self.max_steps {
            return Err(Error::LimitExceeded {
                what: "walk length k+l",
                value: steps as usize,
                cap: self.max_steps as usize,
            });
        }
        Ok(())
    }
}

fn to_integer(value: BigRational, what: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::Consistency(format!(
            "{what} produced non-integer {value}"
        )))
    }
}

/// Walk counts from C_α to every class at once, by dynamic programming in the
/// group algebra: ≤ k weakly increasing J_t multiplications, then l
/// multiplications by the sum of all transpositions.
pub fn walk_counts_by_target(
    alpha: &Partition,
    k: u32,
    l: u32,
    limits: WalkLimits,
) -> Result<BTreeMap<Partition, BigInt>> {
    let d = alpha.size();
    limits.check(d, k + l)?;
    let alg = GroupAlgebra::new(d)?;
    let v = monotone_then_free(&alg, alg.class_sum(alpha)?, k, l);
    Partition::all(d)
        .into_iter()
        .map(|beta| {
            let count = to_integer(alg.class_total(&v, &beta), "walk count")?;
            Ok((beta, count))
        })
        .collect()
}

fn monotone_then_free(
    alg: &GroupAlgebra,
    start: GroupAlgebraVector,
    k: u32,
    l: u32,
) -> GroupAlgebraVector {
    // used[j] = sum over walks that spent j monotone steps with labels ≤ t.
    let mut used = vec![alg.zero(); k as usize + 1];
    used[0] = start;
    for t in 2..=alg.d() {
        for j in 1..=k as usize {
            let step = alg.mul_jm(&used[j - 1], t);
            used[j].add_assign(&step);
        }
    }
    let mut v = used.pop().expect("k + 1 >= 1 entries");
    for _ in 0..l {
        v = alg.mul_all_transpositions(&v);
    }
    v
}

/// W^{k,l}(α, β) by dynamic programming over the group algebra.
pub fn count_walks(q: &HurwitzQuery, limits: WalkLimits) -> Result<BigInt> {
    let counts = walk_counts_by_target(q.alpha(), q.k, q.l, limits)?;
    Ok(counts[q.beta()].clone())
}

/// Steps at or below this length may use direct tuple enumeration.
pub const MAX_DIRECT_STEPS: u32 = 3;

/// W^{k,l}(α, β) by enumerating every tuple (ρ, (s₁ t₁), …) explicitly.
/// Independent of [`GroupAlgebra`]; limited to k + l ≤ 3.
pub fn count_walks_direct(q: &HurwitzQuery, limits: WalkLimits) -> Result<BigInt> {
    let d = q.d();
    limits.check(d, q.k + q.l)?;
    if q.k + q.l > MAX_DIRECT_STEPS {
        return Err(Error::LimitExceeded {
            what: "direct enumeration length k+l",
            value: (q.k + q.l) as usize,
            cap: MAX_DIRECT_STEPS as usize,
        });
    }
    let pairs: Vec<(u32, u32)> = (2..=d).flat_map(|t| (1..t).map(move |s| (s, t))).collect();
    let steps = (q.k + q.l) as usize;
    if pairs.is_empty() && steps > 0 {
        return Ok(BigInt::zero());
    }
    let mut count = 0u64;
    for rho in Permutation::all(d)
        .into_iter()
        .filter(|p| &p.cycle_type() == q.alpha())
    {
        let mut choice = vec![0usize; steps];
        loop {
            let monotone = (1..q.k as usize).all(|i| pairs[choice[i - 1]].1 <= pairs[choice[i]].1);
            if monotone {
                let end = choice
                    .iter()
                    .fold(rho.clone(), |acc, &c| acc.then_swap(pairs[c].0, pairs[c].1));
                if &end.cycle_type() == q.beta() {
                    count += 1;
                }
            }
            // odometer
            let mut i = 0;
            while i < steps {
                choice[i] += 1;
                if choice[i] < pairs.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == steps {
                break;
            }
        }
    }
    Ok(BigInt::from(count))
}

/// Checks e_r(J_1, …, J_d) = Σ_{ℓ(μ) = d−r} C_μ in Q S(d).
pub fn verify_jm_levels(d: u32, r: u32) -> Result<bool> {
    if r >= d.max(1) {
        return Err(Error::LimitExceeded {
            what: "level r",
            value: r as usize,
            cap: d.saturating_sub(1) as usize,
        });
    }
    let alg = GroupAlgebra::new(d)?;
    let e = alg.elementary_in_jm(r).pop().expect("r + 1 entries");
    let mut level = alg.zero();
    for mu in Partition::all(d)
        .iter()
        .filter(|mu| mu.len() == (d - r) as usize)
    {
        level.add_assign(&alg.class_sum(mu)?);
    }
    Ok(e == level)
}

/// Hard cap for the central-character check (full algebra products).
pub const MAX_CENTRAL_D: u32 = 5;

/// Checks that f(Ξ_d), computed inside Q S(d), equals its expansion in
/// central idempotents with eigenvalues f(Cont_λ).
pub fn verify_central_character(d: u32, f: &RegularFunction) -> Result<bool> {
    if d > MAX_CENTRAL_D {
        return Err(Error::LimitExceeded {
            what: "central-character degree d",
            value: d as usize,
            cap: MAX_CENTRAL_D as usize,
        });
    }
    let alg = GroupAlgebra::new(d)?;
    Ok(alg.regular_in_jm(f) == alg.regular_by_idempotents(f)?)
}

/// Scalar by which f(Ξ_d) acts on V^λ, read off the content multiset.
pub fn central_eigenvalue(f: &RegularFunction, lambda: &Partition) -> BigRational {
    let mut ev = ContentEvaluator::for_partition(lambda);
    f.eval_with(|g| ev.generator(g))
}
