//! Symmetric functions evaluated on content multisets, and the regular
//! functions λ ↦ f(Cont_λ) (plus λ ↦ |λ|) used by the S-transform.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{ContentMultiset, Partition};

/// Lazily extends p_j, h_k and e_r of one content multiset.
pub struct ContentEvaluator {
    size: u32,
    contents: ContentMultiset,
    power_sums: Vec<BigInt>,
    complete: Vec<BigRational>,
    elementary: Vec<BigRational>,
}

impl ContentEvaluator {
    pub fn new(contents: ContentMultiset) -> Self {
        ContentEvaluator {
            size: contents.len() as u32,
            contents,
            power_sums: vec![BigInt::zero()],
            complete: vec![BigRational::one()],
            elementary: vec![BigRational::one()],
        }
    }

    pub fn for_partition(lambda: &Partition) -> Self {
        Self::new(lambda.contents())
    }

    /// p_j for j >= 1. (p_0 is not used by any recurrence here.)
    pub fn power_sum(&mut self, j: u32) -> &BigInt {
        while self.power_sums.len() <= j as usize {
            let next = self.contents.power_sum(self.power_sums.len() as u32);
            self.power_sums.push(next);
        }
        &self.power_sums[j as usize]
    }

    /// h_k via k·h_k = Σ_{j=1..k} p_j h_{k−j}.
    pub fn complete(&mut self, k: u32) -> BigRational {
        while self.complete.len() <= k as usize {
            let n = self.complete.len();
            let mut acc = BigRational::zero();
            for j in 1..=n {
                let p = BigRational::from_integer(self.power_sum(j as u32).clone());
                acc += p * &self.complete[n - j];
            }
            self.complete.push(acc / BigInt::from(n));
        }
        self.complete[k as usize].clone()
    }

    /// e_r via r·e_r = Σ_{j=1..r} (−1)^{j−1} p_j e_{r−j}; zero beyond the cardinality.
    pub fn elementary(&mut self, r: u32) -> BigRational {
        if r > self.size {
            return BigRational::zero();
        }
        while self.elementary.len() <= r as usize {
            let n = self.elementary.len();
            let mut acc = BigRational::zero();
            for j in 1..=n {
                let p = BigRational::from_integer(self.power_sum(j as u32).clone());
                let term = p * &self.elementary[n - j];
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            self.elementary.push(acc / BigInt::from(n));
        }
        self.elementary[r as usize].clone()
    }

    pub fn generator(&mut self, g: Generator) -> BigRational {
        match g {
            Generator::Complete(k) => self.complete(k),
            Generator::Elementary(k) => self.elementary(k),
            Generator::PowerSum(k) => BigRational::from_integer(self.power_sum(k).clone()),
            Generator::Size => BigRational::from_integer(BigInt::from(self.size)),
        }
    }
}

pub fn eval_hk(contents: &ContentMultiset, k: u32) -> BigRational {
    ContentEvaluator::new(contents.clone()).complete(k)
}

pub fn eval_er(contents: &ContentMultiset, r: u32) -> BigRational {
    ContentEvaluator::new(contents.clone()).elementary(r)
}

pub fn sum_contents(contents: &ContentMultiset) -> i64 {
    contents.sum()
}

/// h_{(k,1^l)}(Cont_λ) = h_k · h_1^l, with the k = 0 case read as h_1^l.
pub fn eval_hook(lambda: &Partition, k: u32, l: u32) -> BigRational {
    let contents = lambda.contents();
    let h1 = BigRational::from_integer(BigInt::from(contents.sum()));
    eval_hk(&contents, k) * num_traits::pow(h1, l as usize)
}

/// A generator of the algebra of regular functions on Young diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Complete(u32),
    Elementary(u32),
    PowerSum(u32),
    Size,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Complete(k) => write!(f, "H{k}"),
            Generator::Elementary(k) => write!(f, "E{k}"),
            Generator::PowerSum(k) => write!(f, "P{k}"),
            Generator::Size => write!(f, "SIZE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub factors: Vec<(Generator, u32)>,
}

/// A polynomial in the generators H_k, E_k, P_k (evaluated on contents)
/// and SIZE, with exact rational coefficients.
///
/// Parses from strings such as `3/2*H2*E1 + SIZE^2 - P3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularFunction {
    terms: Vec<Term>,
}

impl RegularFunction {
    pub fn constant(c: BigRational) -> Self {
        RegularFunction {
            terms: vec![Term {
                coeff: c,
                factors: Vec::new(),
            }],
        }
    }

    pub fn generator(g: Generator) -> Self {
        RegularFunction {
            terms: vec![Term {
                coeff: BigRational::one(),
                factors: vec![(g, 1)],
            }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Largest generator index, so callers can size their precomputation.
    pub fn max_index(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .map(|(g, _)| match g {
                Generator::Complete(k) | Generator::Elementary(k) | Generator::PowerSum(k) => *k,
                Generator::Size => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, lambda: &Partition) -> BigRational {
        let mut ev = ContentEvaluator::for_partition(lambda);
        self.eval_with(|g| ev.generator(g))
    }

    /// Evaluates with an arbitrary generator assignment.
    pub fn eval_with(&self, mut gen: impl FnMut(Generator) -> BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for term in &self.terms {
            let mut value = term.coeff.clone();
            for &(g, e) in &term.factors {
                value *= num_traits::pow(gen(g), e as usize);
            }
            total += value;
        }
        total
    }
}

pub fn eval_regular(f: &RegularFunction, lambda: &Partition) -> BigRational {
    f.eval(lambda)
}

impl fmt::Display for RegularFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let negative = term.coeff.is_negative();
            if i > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            } else if negative {
                write!(f, "-")?;
            }
            let abs = term.coeff.abs();
            let mut pieces = Vec::new();
            if !abs.is_one() || term.factors.is_empty() {
                pieces.push(abs.to_string());
            }
            for (g, e) in &term.factors {
                pieces.push(if *e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                });
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for RegularFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<RegularFunction> {
        if self.chars.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut terms = Vec::new();
        let mut sign = BigRational::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let mut term = self.term()?;
            term.coeff *= &sign;
            terms.push(term);
            match self.peek() {
                None => break,
                Some('+') => sign = BigRational::one(),
                Some('-') => sign = -BigRational::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(RegularFunction { terms })
    }

    fn term(&mut self) -> Result<Term> {
        let mut coeff = BigRational::one();
        let mut factors: Vec<(Generator, u32)> = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let mut value = BigRational::from_integer(num);
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        value /= BigRational::from_integer(den);
                    }
                    let e = self.exponent()?;
                    coeff *= num_traits::pow(value, e as usize);
                }
                Some(_) => {
                    let g = self.generator()?;
                    let e = self.exponent()?;
                    match factors.iter_mut().find(|(h, _)| *h == g) {
                        Some((_, acc)) => *acc += e,
                        None => factors.push((g, e)),
                    }
                }
                None => return Err(self.err("expected a factor")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        factors.retain(|(_, e)| *e > 0);
        factors.sort();
        Ok(Term { coeff, factors })
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.err("bad integer"))
    }

    fn small_integer(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("index or exponent too large"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some('^') {
            self.pos += 1;
            self.small_integer()
        } else {
            Ok(1)
        }
    }

    fn generator(&mut self) -> Result<Generator> {
        let rest: String = self.chars[self.pos..].iter().collect();
        if rest.starts_with("SIZE") {
            self.pos += 4;
            return Ok(Generator::Size);
        }
        let ctor: fn(u32) -> Generator = match self.peek() {
            Some('H') => Generator::Complete,
            Some('E') => Generator::Elementary,
            Some('P') => Generator::PowerSum,
            _ => return Err(self.err("expected H<k>, E<k>, P<k>, SIZE or a number")),
        };
        self.pos += 1;
        let k = self.small_integer()?;
        if k == 0 {
            return Err(self.err("generator indices start at 1"));
        }
        Ok(ctor(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// Sum over weakly increasing index tuples of the product of values.
    fn brute_complete(values: &[i64], k: usize) -> i64 {
        fn go(values: &[i64], start: usize, k: usize) -> i64 {
            if k == 0 {
                return 1;
            }
            (start..values.len())
                .map(|i| values[i] * go(values, i, k - 1))
                .sum()
        }
        go(values, 0, k)
    }

    fn brute_elementary(values: &[i64], r: usize) -> i64 {
        fn go(values: &[i64], start: usize, r: usize) -> i64 {
            if r == 0 {
                return 1;
            }
            (start..values.len())
                .map(|i| values[i] * go(values, i + 1, r - 1))
                .sum()
        }
        go(values, 0, r)
    }

    #[test]
    fn hk_examples() {
        assert_eq!(eval_hk(&p("2,1").contents(), 2), q(1));
        assert_eq!(eval_hk(&p("4,2").contents(), 0), q(1));
        assert_eq!(eval_hk(&p("1").contents(), 3), q(0));
        assert_eq!(eval_hook(&p("3"), 2, 0), q(7));
    }

    #[test]
    fn er_examples() {
        assert_eq!(eval_er(&p("2,1").contents(), 2), q(-1));
        assert_eq!(eval_er(&p("2,1").contents(), 0), q(1));
        assert_eq!(eval_er(&p("2,1").contents(), 4), q(0));
    }

    #[test]
    fn content_sums() {
        assert_eq!(sum_contents(&p("2,1").contents()), 0);
        assert_eq!(sum_contents(&p("6").contents()), 15);
        assert_eq!(sum_contents(&p("1,1").contents()), -1);
    }

    #[test]
    fn hook_examples() {
        for k in 0..4 {
            for l in 1..4 {
                assert_eq!(eval_hook(&p("2,1"), k, l), q(0));
            }
        }
        assert_eq!(eval_hook(&p("2"), 1, 1), q(1));
        assert_eq!(eval_hook(&p("2,2"), 0, 3), q(0));
        assert_eq!(eval_hook(&p("3"), 0, 2), q(9));
    }

    #[test]
    fn newton_recurrence_matches_monomial_expansion() {
        for d in 0..=8 {
            for lambda in Partition::all(d) {
                let c = lambda.contents();
                let mut ev = ContentEvaluator::new(c.clone());
                for k in 0..=6 {
                    assert_eq!(ev.complete(k), q(brute_complete(c.values(), k as usize)));
                    assert_eq!(
                        ev.elementary(k),
                        q(brute_elementary(c.values(), k as usize))
                    );
                }
            }
        }
    }

    #[test]
    fn e_h_generating_identity() {
        for d in 1..=8 {
            for lambda in Partition::all(d) {
                let mut ev = ContentEvaluator::for_partition(&lambda);
                for k in 1..=6u32 {
                    let mut s = BigRational::zero();
                    for r in 0..=k {
                        let term = ev.elementary(r) * ev.complete(k - r);
                        if r % 2 == 0 {
                            s += term;
                        } else {
                            s -= term;
                        }
                    }
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn hook_factorization() {
        for d in 1..=7 {
            for lambda in Partition::all(d) {
                let c = lambda.contents();
                let h1 = q(c.sum());
                for k in 0..=4 {
                    assert_eq!(eval_hook(&lambda, k, 0), eval_hk(&c, k));
                }
                for l in 0..=4 {
                    assert_eq!(
                        eval_hook(&lambda, 1, l),
                        num_traits::pow(h1.clone(), l as usize + 1)
                    );
                }
            }
        }
    }

    #[test]
    fn regular_function_examples() {
        let size: RegularFunction = "SIZE".parse().unwrap();
        assert_eq!(size.eval(&p("3,1")), q(4));
        let h1sq: RegularFunction = "H1^2".parse().unwrap();
        assert_eq!(h1sq.eval(&p("2")), q(1));
        let zero: RegularFunction = "E1 - P1".parse().unwrap();
        for lambda in Partition::all(6) {
            assert!(zero.eval(&lambda).is_zero());
        }
        let f: RegularFunction = "3/2*H2*E1 + SIZE^2 - P3".parse().unwrap();
        // contents of (2,1): h2 = 1, e1 = 0, p3 = 0, size 3
        assert_eq!(f.eval(&p("2,1")), q(9));
        // contents of (2): h2 = 1, e1 = 1, p3 = 1, size 2
        assert_eq!(f.eval(&p("2")), BigRational::new(9.into(), 2.into()));
        let one: RegularFunction = "1".parse().unwrap();
        assert_eq!(one.eval(&p("4,1")), q(1));
        assert_eq!(f.max_index(), 3);
    }

    #[test]
    fn parser_rejects_garbage() {
        for bad in ["", "H0", "X2", "H2 +", "2/0", "H2 H3", "3**H1"] {
            assert!(bad.parse::<RegularFunction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_reparses() {
        for s in [
            "3/2*H2*E1 + SIZE^2 - P3",
            "-H1",
            "1",
            "H2*E1",
            "-2/3 + P2^3",
        ] {
            let f: RegularFunction = s.parse().unwrap();
            let again: RegularFunction = f.to_string().parse().unwrap();
            assert_eq!(f, again, "{s} -> {f}");
        }
    }
}
