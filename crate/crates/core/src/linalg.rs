//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Incremental row echelon basis; used to pick linearly independent rows.
#[derive(Clone, Debug, Default)]
pub struct RowBasis {
    /// (pivot column, row normalized to 1 at the pivot)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RowBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the rows so far.
    pub fn try_add(&mut self, row: &[BigRational]) -> bool {
        let mut r = row.to_vec();
        for (pivot, basis) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let f = r[*pivot].clone();
            for (x, b) in r.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &r[pivot];
        for x in r.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((pivot, r));
        true
    }
}

/// Solves the square system a·x = b.
pub fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch("linear system must be square".into()));
    }
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::Singular(format!("no pivot in column {col} of {n}")));
        };
        a.swap(col, p);
        b.swap(col, p);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        let pivot_row = a[col].clone();
        let pivot_b = b[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            b[r] -= &f * &pivot_b;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(a, vec![q(3), q(5)]).unwrap();
        assert_eq!(
            x,
            vec![
                BigRational::new(4.into(), 5.into()),
                BigRational::new(7.into(), 5.into())
            ]
        );
    }

    #[test]
    fn singular_system() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(matches!(
            solve(a, vec![q(1), q(2)]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn row_basis_rank() {
        let mut b = RowBasis::new();
        assert!(b.try_add(&[q(1), q(2), q(3)]));
        assert!(!b.try_add(&[q(2), q(4), q(6)]));
        assert!(b.try_add(&[q(0), q(1), q(0)]));
        assert!(!b.try_add(&[q(1), q(5), q(3)]));
        assert_eq!(b.rank(), 2);
    }

    proptest! {
        #[test]
        fn solve_recovers_solution(
            entries in proptest::collection::vec(-5i64..=5, 9),
            xs in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let a: Vec<Vec<BigRational>> = entries.chunks(3).map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let x: Vec<BigRational> = xs.iter().map(|&v| q(v)).collect();
            let b: Vec<BigRational> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
            let mut basis = RowBasis::new();
            let rank = a.iter().filter(|r| basis.try_add(r)).count();
            match solve(a, b) {
                Ok(sol) => { prop_assert_eq!(rank, 3); prop_assert_eq!(sol, x); }
                Err(_) => prop_assert!(rank < 3),
            }
        }
    }
}
