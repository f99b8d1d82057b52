//! Resonance-arrangement chambers in R_{m,n} and exact polynomial fits of
//! H^{k,l} over lattice points of one chamber.
//!
//! Points are (x₁ ≥ … ≥ x_m > 0, y₁ ≥ … ≥ y_n > 0) with Σx = Σy. Walls are
//! Σ_{i∈I} x_i = Σ_{j∈J} y_j for proper nonempty I, J; a wall and its
//! complement (Iᶜ, Jᶜ) coincide, and the canonical representative has 1 ∈ I.
//! Chambers are identified by their sign vectors on the canonical walls.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::engine::{parity_vanishes, HurwitzEngine, HurwitzQuery};
use crate::error::{Error, Result};
use crate::linalg::{solve, RowBasis};
use crate::partitions::Partition;

pub const DEFAULT_DEGREE_CAP: u32 = 12;
pub const MIN_VALIDATION: usize = 10;
/// Held-out points beyond this many are not evaluated.
pub const MAX_VALIDATION: usize = 30;
/// Largest m or n accepted; walls number (2^m − 2)(2^n − 2)/2.
pub const MAX_SIDE_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberPoint {
    x: Vec<u32>,
    y: Vec<u32>,
}

impl ChamberPoint {
    pub fn new(x: Vec<u32>, y: Vec<u32>) -> Result<Self> {
        let check = |v: &[u32], side: &str| -> Result<()> {
            if v.is_empty() || v.len() > MAX_SIDE_LEN {
                return Err(Error::OutsideRegion(format!(
                    "{side} must have between 1 and {MAX_SIDE_LEN} coordinates"
                )));
            }
            if v.contains(&0) {
                return Err(Error::OutsideRegion(format!(
                    "{side} has a zero coordinate"
                )));
            }
            if v.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::OutsideRegion(format!(
                    "{side} = {v:?} is not weakly decreasing"
                )));
            }
            Ok(())
        };
        check(&x, "x")?;
        check(&y, "y")?;
        let (sx, sy) = (
            x.iter().map(|&v| v as u64).sum::<u64>(),
            y.iter().map(|&v| v as u64).sum::<u64>(),
        );
        if sx != sy {
            return Err(Error::OutsideRegion(format!(
                "coordinate sums differ: {sx} and {sy}"
            )));
        }
        Ok(ChamberPoint { x, y })
    }

    pub fn from_partitions(alpha: &Partition, beta: &Partition) -> Result<Self> {
        Self::new(alpha.parts().to_vec(), beta.parts().to_vec())
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn d(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn alpha(&self) -> Partition {
        Partition::new(self.x.clone()).expect("validated")
    }

    pub fn beta(&self) -> Partition {
        Partition::new(self.y.clone()).expect("validated")
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.x.windows(2).all(|w| w[0] > w[1]) && self.y.windows(2).all(|w| w[0] > w[1])
    }

    /// sign(Σ_{i∈I} x_i − Σ_{j∈J} y_j) for 1-indexed I, J.
    pub fn sign_at(&self, wall: &Wall) -> Sign {
        let sx: i64 = wall.i.iter().map(|&i| self.x[i - 1] as i64).sum();
        let sy: i64 = wall.j.iter().map(|&j| self.y[j - 1] as i64).sum();
        Sign::of(sx - sy)
    }

    pub fn wall_signs(&self) -> Vec<(Wall, Sign)> {
        canonical_walls(self.m(), self.n())
            .into_iter()
            .map(|w| {
                let s = self.sign_at(&w);
                (w, s)
            })
            .collect()
    }

    pub fn signature(&self) -> String {
        self.wall_signs().iter().map(|(_, s)| s.symbol()).collect()
    }

    pub fn first_wall(&self) -> Option<Wall> {
        self.wall_signs()
            .into_iter()
            .find(|(_, s)| *s == Sign::Zero)
            .map(|(w, _)| w)
    }

    fn require_off_wall(&self) -> Result<()> {
        match self.first_wall() {
            Some(w) => Err(Error::OnWall {
                alpha: self.alpha().to_string(),
                beta: self.beta().to_string(),
                i: w.i,
                j: w.j,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ChamberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.alpha(), self.beta())
    }
}

impl Serialize for ChamberPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ChamberPoint", 2)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    fn of(v: i64) -> Sign {
        match v.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Neg,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Pos,
        }
    }

    pub fn symbol(&self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn flip(&self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// A wall (I, J), 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Wall {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl Wall {
    pub fn complement(&self, m: usize, n: usize) -> Wall {
        Wall {
            i: (1..=m).filter(|v| !self.i.contains(v)).collect(),
            j: (1..=n).filter(|v| !self.j.contains(v)).collect(),
        }
    }
}

/// Canonical walls: 1 ∈ I ⊊ {1..m}, ∅ ≠ J ⊊ {1..n}, ordered by bitmask.
pub fn canonical_walls(m: usize, n: usize) -> Vec<Wall> {
    let mut out = Vec::new();
    if m < 2 || n < 2 {
        return out;
    }
    let indices = |mask: u32, len: usize| -> Vec<usize> {
        (0..len)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    };
    for im in (1..(1u32 << m) - 1).filter(|im| im & 1 == 1) {
        for jm in 1..(1u32 << n) - 1 {
            out.push(Wall {
                i: indices(im, m),
                j: indices(jm, n),
            });
        }
    }
    out
}

/// Sign vector on the canonical walls.
pub fn wall_signs(point: &ChamberPoint) -> Vec<(Wall, Sign)> {
    point.wall_signs()
}

pub fn same_chamber(p: &ChamberPoint, q: &ChamberPoint) -> Result<bool> {
    if (p.m(), p.n()) != (q.m(), q.n()) {
        return Err(Error::SizeMismatch(format!(
            "points live in R_({},{}) and R_({},{})",
            p.m(),
            p.n(),
            q.m(),
            q.n()
        )));
    }
    p.require_off_wall()?;
    q.require_off_wall()?;
    Ok(p.signature() == q.signature())
}

/// Strictly decreasing vectors of length `len` with entries in 1..=bound, by sum.
fn strict_vectors(len: usize, bound: u32) -> HashMap<u32, Vec<Vec<u32>>> {
    fn go(len: usize, below: u32, cur: &mut Vec<u32>, out: &mut HashMap<u32, Vec<Vec<u32>>>) {
        if cur.len() == len {
            out.entry(cur.iter().sum()).or_default().push(cur.clone());
            return;
        }
        let need = (len - cur.len()) as u32;
        for v in (need..below).rev() {
            cur.push(v);
            go(len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = HashMap::new();
    go(len, bound + 1, &mut Vec::new(), &mut out);
    out
}

/// Every distinct-part lattice point with coordinates ≤ bound in the chamber
/// of `base`, in lexicographic order.
pub fn chamber_points(base: &ChamberPoint, bound: u32) -> Result<Vec<ChamberPoint>> {
    base.require_off_wall()?;
    let signature = base.signature();
    let xs = strict_vectors(base.m(), bound);
    let ys = strict_vectors(base.n(), bound);
    let mut out = Vec::new();
    for (sum, xv) in &xs {
        let Some(yv) = ys.get(sum) else { continue };
        for x in xv {
            for y in yv {
                let p = ChamberPoint {
                    x: x.clone(),
                    y: y.clone(),
                };
                if p.signature() == signature {
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `count` distinct same-chamber distinct-part points with coordinates
/// ≤ bound, chosen by a seeded shuffle of all such points.
pub fn sample_chamber(
    base: &ChamberPoint,
    count: usize,
    bound: u32,
    seed: u64,
) -> Result<Vec<ChamberPoint>> {
    let mut all = chamber_points(base, bound)?;
    if all.len() < count {
        return Err(Error::Exhausted {
            available: all.len(),
            requested: count,
        });
    }
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    all.truncate(count);
    Ok(all)
}

fn rational_string<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitTerm {
    /// Exponents of (x₁..x_m, y₁..y_n); y_n never appears since it is
    /// eliminated through Σx = Σy.
    pub exponents: Vec<u32>,
    #[serde(serialize_with = "rational_string")]
    pub coeff: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitSample {
    pub point: ChamberPoint,
    #[serde(serialize_with = "rational_string")]
    pub value: BigRational,
    #[serde(serialize_with = "rational_string")]
    pub residual: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialFit {
    pub m: usize,
    pub n: usize,
    pub k: u32,
    pub l: u32,
    pub variables: Vec<String>,
    pub degree: u32,
    pub coefficients: Vec<FitTerm>,
    pub training: Vec<FitSample>,
    pub validation: Vec<FitSample>,
    pub chamber_signature: String,
    /// H vanishes on the whole chamber because k + l and m + n differ in parity.
    pub parity_vanishes: bool,
}

impl PolynomialFit {
    pub fn max_abs_residual(&self) -> BigRational {
        self.training
            .iter()
            .chain(&self.validation)
            .map(|s| num_traits::abs(s.residual.clone()))
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

/// All exponent vectors in `vars` variables of total degree ≤ D, by degree.
fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn go(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == vars {
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut exact = Vec::new();
        go(vars, d, &mut Vec::new(), &mut exact);
        out.extend(exact.into_iter().filter(|e| e.iter().sum::<u32>() == d));
    }
    out
}

/// Coordinates used by the fit: x₁..x_m, y₁..y_{n−1}.
fn reduced_coordinates(p: &ChamberPoint) -> Vec<BigInt> {
    p.x.iter()
        .chain(&p.y[..p.n() - 1])
        .map(|&v| BigInt::from(v))
        .collect()
}

fn monomial_row(coords: &[BigInt], monos: &[Vec<u32>]) -> Vec<BigRational> {
    monos
        .iter()
        .map(|e| {
            let v: BigInt = coords
                .iter()
                .zip(e)
                .map(|(c, &k)| num_traits::pow(c.clone(), k as usize))
                .product();
            BigRational::from_integer(v)
        })
        .collect()
}

/// Finds the least total degree D ≤ cap for which exact interpolation of
/// H^{k,l} on linearly independent training points leaves zero residual on
/// at least [`MIN_VALIDATION`] held-out points. Points are taken in the given
/// order, so a shuffled sample gives a random design.
pub fn fit_chamber_polynomial(
    engine: &HurwitzEngine,
    k: u32,
    l: u32,
    points: &[ChamberPoint],
    cap: u32,
) -> Result<PolynomialFit> {
    let Some(first) = points.first() else {
        return Err(Error::Exhausted {
            available: 0,
            requested: 1 + MIN_VALIDATION,
        });
    };
    let (m, n) = (first.m(), first.n());
    for p in points {
        if !same_chamber(first, p)? {
            return Err(Error::OutsideRegion(format!(
                "{p} is not in the chamber {} of {first}",
                first.signature()
            )));
        }
    }
    let parity = parity_vanishes(&HurwitzQuery::new(k, l, first.alpha(), first.beta())?);
    let coords: Vec<Vec<BigInt>> = points.iter().map(reduced_coordinates).collect();
    let mut values: HashMap<usize, BigRational> = HashMap::new();
    let mut value = |i: usize| -> Result<BigRational> {
        if let Some(v) = values.get(&i) {
            return Ok(v.clone());
        }
        let q = HurwitzQuery::new(k, l, points[i].alpha(), points[i].beta())?;
        let v = engine.h_char(&q)?;
        values.insert(i, v.clone());
        Ok(v)
    };

    let vars = m + n - 1;
    let mut last_failure = String::from("no degree attempted");
    for degree in 0..=cap {
        let monos = monomials(vars, degree);
        let rows: Vec<Vec<BigRational>> = coords.iter().map(|c| monomial_row(c, &monos)).collect();
        let mut basis = RowBasis::new();
        let mut training = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if basis.rank() == monos.len() {
                break;
            }
            if basis.try_add(row) {
                training.push(i);
            }
        }
        let held_out: Vec<usize> = (0..points.len())
            .filter(|i| !training.contains(i))
            .take(MAX_VALIDATION)
            .collect();
        if training.len() < monos.len() || held_out.len() < MIN_VALIDATION {
            return Err(Error::DegreeCapExceeded {
                cap: degree.saturating_sub(1),
                diagnostic: format!(
                    "degree {degree} needs {} independent points plus {MIN_VALIDATION} held out; \
                     only {} points of rank {} were supplied. Last failure: {last_failure}",
                    monos.len(),
                    points.len(),
                    training.len()
                ),
            });
        }
        let a: Vec<Vec<BigRational>> = training.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<BigRational> = training.iter().map(|&i| value(i)).collect::<Result<_>>()?;
        let coeffs = solve(a, b)?;
        let eval =
            |i: usize| -> BigRational { rows[i].iter().zip(&coeffs).map(|(r, c)| r * c).sum() };
        let mut validation = Vec::new();
        let mut bad = 0usize;
        for &i in &held_out {
            let v = value(i)?;
            let residual = eval(i) - &v;
            if !residual.is_zero() {
                bad += 1;
                if bad == 1 {
                    last_failure = format!("degree {degree}: residual {residual} at {}", points[i]);
                }
            }
            validation.push(FitSample {
                point: points[i].clone(),
                value: v,
                residual,
            });
        }
        if bad > 0 {
            last_failure = format!(
                "{last_failure} ({bad} of {} held-out points nonzero)",
                held_out.len()
            );
            continue;
        }
        let mut training_samples = Vec::new();
        for &i in &training {
            let v = value(i)?;
            training_samples.push(FitSample {
                point: points[i].clone(),
                residual: eval(i) - &v,
                value: v,
            });
        }
        let coefficients = monos
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let mut exponents = e.clone();
                exponents.push(0);
                FitTerm {
                    exponents,
                    coeff: c,
                }
            })
            .collect();
        let variables = (1..=m)
            .map(|i| format!("x{i}"))
            .chain((1..=n).map(|j| format!("y{j}")))
            .collect();
        return Ok(PolynomialFit {
            m,
            n,
            k,
            l,
            variables,
            degree,
            coefficients,
            training: training_samples,
            validation,
            chamber_signature: first.signature(),
            parity_vanishes: parity,
        });
    }
    Err(Error::DegreeCapExceeded {
        cap,
        diagnostic: last_failure,
    })
}

/// Exact value of a fitted polynomial at a point.
pub fn evaluate_fit(fit: &PolynomialFit, point: &ChamberPoint) -> Result<BigRational> {
    if (point.m(), point.n()) != (fit.m, fit.n) {
        return Err(Error::SizeMismatch(format!(
            "fit has {} + {} variables, point has {} + {}",
            fit.m,
            fit.n,
            point.m(),
            point.n()
        )));
    }
    let coords: Vec<BigInt> = point
        .x
        .iter()
        .chain(&point.y)
        .map(|&v| BigInt::from(v))
        .collect();
    let mut total = BigRational::zero();
    for term in &fit.coefficients {
        let mono: BigInt = coords
            .iter()
            .zip(&term.exponents)
            .map(|(c, &e)| num_traits::pow(c.clone(), e as usize))
            .product();
        total += &term.coeff * BigRational::from_integer(mono);
    }
    Ok(total)
}

/// Convenience: `a/b` pair syntax, e.g. "3,1/2,2".
pub fn parse_point(s: &str) -> Result<ChamberPoint> {
    let (a, b) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected alpha/beta, got {s:?}")))?;
    let a: Partition = a.parse()?;
    let b: Partition = b.parse()?;
    ChamberPoint::from_partitions(&a, &b)
}
