//! Content-product tau functions
//! τ_n = Σ_λ Π_{□∈λ} y_{c(□)+n} s_λ(A) s_λ(B), y_k = z e^{ku}/(1−kt),
//! and the first bilinear equation of the 2-Toda lattice in x = p_1(A), y = p_1(B).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::content::ContentEvaluator;
use crate::error::{Error, Result};
use crate::partitions::{factorial, Partition};
use crate::series::{SeriesEntry, SeriesKey, Side, TruncatedSeries, Truncation};

/// Which power sums p_i(A), p_i(B) survive; the rest are set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSumProfile {
    /// Only x = p_1(A) and y = p_1(B).
    FirstOnly,
    /// p_i for i ≤ the bound.
    UpTo(u32),
    /// Every power sum.
    Full,
}

impl PowerSumProfile {
    pub fn retains(&self, mu: &Partition) -> bool {
        match self {
            PowerSumProfile::FirstOnly => mu.parts().iter().all(|&p| p == 1),
            PowerSumProfile::UpTo(j) => mu.parts().iter().all(|p| p <= j),
            PowerSumProfile::Full => true,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TauOptions {
    pub profile: PowerSumProfile,
    pub max_dz: u32,
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions {
            profile: PowerSumProfile::FirstOnly,
            max_dz: 8,
        }
    }
}

impl TauOptions {
    pub fn with_profile(profile: PowerSumProfile) -> Self {
        TauOptions {
            profile,
            ..Self::default()
        }
    }
}

/// s_λ = Σ_μ (χ^λ_μ / z_μ) p_μ, restricted to retained μ.
fn schur_expansion(
    table: &CharacterTable,
    row: usize,
    profile: PowerSumProfile,
) -> Vec<(Partition, BigRational)> {
    table
        .order()
        .iter()
        .enumerate()
        .filter(|(_, mu)| profile.retains(mu))
        .filter_map(|(j, mu)| {
            let chi = table.entries()[row][j];
            (chi != 0).then(|| {
                (
                    mu.clone(),
                    BigRational::new(BigInt::from(chi), mu.z_order().into()),
                )
            })
        })
        .collect()
}

/// τ_n truncated at `trunc`.
pub fn build_tau(n: i64, trunc: Truncation, options: TauOptions) -> Result<TruncatedSeries> {
    if trunc.z > options.max_dz {
        return Err(Error::LimitExceeded {
            what: "tau truncation Dz",
            value: trunc.z as usize,
            cap: options.max_dz as usize,
        });
    }
    let mut tau = TruncatedSeries::one(trunc);
    for d in 1..=trunc.z {
        let table = CharacterTable::compute(d, d)?;
        for (row, lambda) in table.order().iter().enumerate() {
            // Π y_{c+n} = z^d Π e^{(c+n)u} Π 1/(1−(c+n)t)
            //          = z^d Σ_k h_k(c+n) t^k · Σ_l s^l/l! u^l, s = Σ(c+n)
            let shifted = lambda.contents().shifted(n);
            let s = BigRational::from_integer(BigInt::from(shifted.sum()));
            let mut ev = ContentEvaluator::new(shifted);
            let weights: Vec<(u32, u32, BigRational)> = (0..=trunc.t)
                .flat_map(|k| {
                    let hk = ev.complete(k);
                    let s = s.clone();
                    (0..=trunc.u).map(move |l| {
                        let w = &hk * num_traits::pow(s.clone(), l as usize)
                            / BigRational::from_integer(factorial(l).into());
                        (k, l, w)
                    })
                })
                .filter(|(_, _, w)| !w.is_zero())
                .collect();
            if weights.is_empty() {
                continue;
            }
            let schur = schur_expansion(&table, row, options.profile);
            for (mu, cm) in &schur {
                for (nu, cn) in &schur {
                    let c = cm * cn;
                    for (k, l, w) in &weights {
                        tau.add_term(SeriesKey::new(d, *k, *l, mu, nu)?, &c * w);
                    }
                }
            }
        }
    }
    Ok(tau)
}

/// y_n = z e^{nu}/(1−nt), truncated.
pub fn content_weight_series(n: i64, trunc: Truncation) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::zero(trunc);
    if trunc.z == 0 {
        return Ok(out);
    }
    let n = BigRational::from_integer(n.into());
    let empty = Partition::empty();
    for k in 0..=trunc.t {
        for l in 0..=trunc.u {
            let c = num_traits::pow(n.clone(), (k + l) as usize)
                / BigRational::from_integer(factorial(l).into());
            out.add_term(SeriesKey::new(1, k, l, &empty, &empty)?, c);
        }
    }
    Ok(out)
}

/// Multiplies each coefficient by (−1)^{t+u} and applies ω to both sides
/// (p_μ ↦ (−1)^{|μ|−ℓ(μ)} p_μ). Conjugating every diagram shows
/// τ_{−n} = reflect(τ_n).
pub fn reflect(series: &TruncatedSeries) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(series.truncation());
    for (key, c) in series.iter() {
        let sign = (key.t + key.u) as i64
            + (key.a.degree() as i64 - key.a.to_partition().len() as i64)
            + (key.b.degree() as i64 - key.b.to_partition().len() as i64);
        let c = if sign % 2 == 0 { c.clone() } else { -c.clone() };
        out.add_term(*key, c);
    }
    out
}

/// One coefficient of both sides of the bilinear equation.
#[derive(Clone, Debug, Serialize)]
pub struct TodaEntry {
    pub z: u32,
    pub t: u32,
    pub u: u32,
    #[serde(rename = "A")]
    pub a: Partition,
    #[serde(rename = "B")]
    pub b: Partition,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TodaReport {
    pub n: i64,
    pub truncation: Truncation,
    /// γ_n read off the z¹ part of the left-hand side.
    pub gamma: Vec<SeriesEntry>,
    /// Whether γ_n equals z e^{nu}/(1−nt) within the truncation.
    pub gamma_is_content_weight: bool,
    pub entries: Vec<TodaEntry>,
    pub compared: usize,
    pub mismatches: usize,
    pub verdict: bool,
}

/// Checks τ_n ∂x∂y τ_n − ∂xτ_n ∂yτ_n = γ_n τ_{n+1} τ_{n−1} coefficientwise,
/// with γ_n taken from the z¹ part of the left side and then tested at all
/// higher orders. Only p_1 is retained on each side.
pub fn toda_first_equation_check(n: i64, trunc: Truncation, max_dz: u32) -> Result<TodaReport> {
    let options = TauOptions {
        profile: PowerSumProfile::FirstOnly,
        max_dz,
    };
    let tau = build_tau(n, trunc, options)?;
    let up = build_tau(n + 1, trunc, options)?;
    let down = build_tau(n - 1, trunc, options)?;
    let dx = tau.derivative(Side::A, 1);
    let dy = tau.derivative(Side::B, 1);
    let dxy = dx.derivative(Side::B, 1);
    let lhs = tau.mul(&dxy).sub(&dx.mul(&dy));
    let gamma = lhs.z_component(1);
    let rhs = gamma.mul(&up).mul(&down);
    let expected_gamma = content_weight_series(n, trunc)?;

    let mut keys = lhs.sorted_keys();
    keys.extend(rhs.sorted_keys());
    keys.sort_by_cached_key(SeriesKey::sort_key);
    keys.dedup();
    let entries: Vec<TodaEntry> = keys
        .iter()
        .map(|key| {
            let (l, r) = (lhs.coeff(key), rhs.coeff(key));
            TodaEntry {
                z: key.z as u32,
                t: key.t as u32,
                u: key.u as u32,
                a: key.a.to_partition(),
                b: key.b.to_partition(),
                lhs: l.to_string(),
                rhs: r.to_string(),
                equal: l == r,
            }
        })
        .collect();
    let mismatches = entries.iter().filter(|e| !e.equal).count();
    Ok(TodaReport {
        n,
        truncation: trunc,
        gamma: gamma.to_entries(),
        gamma_is_content_weight: gamma == expected_gamma,
        compared: entries.len(),
        mismatches,
        verdict: mismatches == 0 && !entries.is_empty(),
        entries,
    })
}

/// τ_n(z,t,u) = τ_0(z e^{nu}/(1−nt), t/(1−nt), u), comparing a direct build
/// of τ_n with substitution into τ_0.
pub fn shift_substitution_check(n: i64, trunc: Truncation, options: TauOptions) -> Result<bool> {
    let direct = build_tau(n, trunc, options)?;
    let base = build_tau(0, trunc, options)?;
    let empty = Partition::empty();
    let zs = content_weight_series(n, trunc)?;
    let mut ts = TruncatedSeries::zero(trunc);
    for j in 1..=trunc.t {
        let c = num_traits::pow(BigRational::from_integer(n.into()), (j - 1) as usize);
        ts.add_term(SeriesKey::new(0, j, 0, &empty, &empty)?, c);
    }
    let us = TruncatedSeries::term(trunc, (0, 0, 1), &empty, &empty, BigRational::one())?;
    let substituted = if trunc.t == 0 || trunc.u == 0 {
        compose_partial(&base, &zs, &ts, &us, trunc)?
    } else {
        base.compose(&zs, &ts, &us)?
    };
    Ok(substituted == direct)
}

/// `compose` rejects an empty substitute; when t or u is truncated away the
/// variable never appears, so any placeholder divisible by it will do.
fn compose_partial(
    base: &TruncatedSeries,
    zs: &TruncatedSeries,
    ts: &TruncatedSeries,
    us: &TruncatedSeries,
    trunc: Truncation,
) -> Result<TruncatedSeries> {
    let empty = Partition::empty();
    let wide = Truncation::new(trunc.z, trunc.t.max(1), trunc.u.max(1));
    let widen = |s: &TruncatedSeries| {
        let mut out = TruncatedSeries::zero(wide);
        for (k, c) in s.iter() {
            out.add_term(*k, c.clone());
        }
        out
    };
    let ts = if ts.is_zero() {
        TruncatedSeries::term(wide, (0, 1, 0), &empty, &empty, BigRational::one())?
    } else {
        widen(ts)
    };
    let us = if us.is_zero() {
        TruncatedSeries::term(wide, (0, 0, 1), &empty, &empty, BigRational::one())?
    } else {
        widen(us)
    };
    Ok(widen(base).compose(&widen(zs), &ts, &us)?.restrict(trunc))
}
