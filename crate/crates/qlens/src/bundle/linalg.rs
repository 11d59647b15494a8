//! Fraction-free linear solving over exact integral domains.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qarith::QLaurent;

/// An integral domain with exact division.
pub trait ExactRing: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Option<Self>;
}

impl ExactRing for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
}

impl ExactRing for QLaurent {
    fn zero() -> Self {
        QLaurent::zero()
    }
    fn one() -> Self {
        QLaurent::one()
    }
    fn is_zero(&self) -> bool {
        QLaurent::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        QLaurent::div_exact(self, o)
    }
}

/// `sum_i numerators[i] * column_i = denominator * target`.
#[derive(Clone, Debug)]
pub struct Combination<R> {
    pub numerators: Vec<R>,
    pub denominator: R,
}

/// Decides whether `target` lies in the span of `columns` and returns a combination if so.
pub fn solve_in_span<K: Ord + Clone, R: ExactRing>(
    columns: &[BTreeMap<K, R>],
    target: &BTreeMap<K, R>,
) -> (usize, Option<Combination<R>>) {
    let keys: BTreeSet<K> = columns
        .iter()
        .flat_map(|c| c.keys().cloned())
        .chain(target.keys().cloned())
        .collect();
    let ncols = columns.len();
    let mut m: Vec<Vec<R>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<R> = columns
                .iter()
                .map(|c| c.get(k).cloned().unwrap_or_else(R::zero))
                .collect();
            row.push(target.get(k).cloned().unwrap_or_else(R::zero));
            row
        })
        .collect();
    let nrows = m.len();
    let mut prev = R::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..=ncols {
        if row >= nrows {
            break;
        }
        let Some(pr) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if col == ncols {
            return (pivots.len(), None);
        }
        m.swap(row, pr);
        for r in row + 1..nrows {
            for c in col + 1..=ncols {
                let v = m[row][col].mul(&m[r][c]).sub(&m[r][col].mul(&m[row][c]));
                m[r][c] = v
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[r][col] = R::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    let denominator = pivots
        .iter()
        .enumerate()
        .fold(R::one(), |acc, (i, &c)| acc.mul(&m[i][c]));
    let mut numerators = vec![R::zero(); ncols];
    for i in (0..rank).rev() {
        let mut acc = m[i][ncols].mul(&denominator);
        for &cj in &pivots[i + 1..] {
            acc = acc.sub(&m[i][cj].mul(&numerators[cj]));
        }
        numerators[pivots[i]] = acc
            .div_exact(&m[i][pivots[i]])
            .expect("back substitution divides exactly");
    }
    (
        rank,
        Some(Combination {
            numerators,
            denominator,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_membership() {
        let cols = vec![
            BTreeMap::from([(0, r(1)), (1, r(2))]),
            BTreeMap::from([(1, r(1)), (2, r(1))]),
            BTreeMap::from([(0, r(1)), (1, r(3)), (2, r(1))]),
        ];
        let target = BTreeMap::from([(0, r(2)), (1, r(5)), (2, r(1))]);
        let (rank, sol) = solve_in_span(&cols, &target);
        assert_eq!(rank, 2);
        let sol = sol.unwrap();
        for key in 0..3 {
            let lhs = cols.iter().zip(&sol.numerators).fold(r(0), |acc, (c, n)| {
                acc + c.get(&key).cloned().unwrap_or_default() * n
            });
            assert_eq!(lhs, target[&key].clone() * &sol.denominator);
        }
        let bad = BTreeMap::from([(0, r(1))]);
        assert!(solve_in_span(&cols[1..2], &bad).1.is_none());
    }

    #[test]
    fn laurent_membership() {
        let q = QLaurent::q_pow;
        let cols = vec![
            BTreeMap::from([(0, q(0)), (1, q(2))]),
            BTreeMap::from([(1, q(0) - q(4))]),
        ];
        let target = BTreeMap::from([(0, q(0))]);
        let sol = solve_in_span(&cols, &target).1.unwrap();
        let row1 = &(&cols[0][&1] * &sol.numerators[0]) + &(&cols[1][&1] * &sol.numerators[1]);
        assert!(row1.is_zero());
        assert_eq!(&cols[0][&0] * &sol.numerators[0], sol.denominator);
    }
}
