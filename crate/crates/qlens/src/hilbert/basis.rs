use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::LabelError;

/// Exact half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    pub twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + o.twice)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - o.twice)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arrow {
    Up,
    Down,
}

impl Arrow {
    pub fn index(self) -> usize {
        match self {
            Arrow::Up => 0,
            Arrow::Down => 1,
        }
    }

    pub fn from_index(i: usize) -> Arrow {
        if i == 0 {
            Arrow::Up
        } else {
            Arrow::Down
        }
    }
}

/// Label `|j, mu, n, arrow>` in doubled units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisVector {
    pub two_j: u32,
    pub arrow: Arrow,
    pub two_mu: i32,
    pub two_n: i32,
}

/// Range of `two_n` for a given level and arrow, or `None` if empty.
pub fn n_bound(two_j: u32, arrow: Arrow) -> Option<i32> {
    match arrow {
        Arrow::Up => Some(two_j as i32 + 1),
        Arrow::Down if two_j >= 1 => Some(two_j as i32 - 1),
        Arrow::Down => None,
    }
}

impl BasisVector {
    pub fn new(two_j: i64, two_mu: i64, two_n: i64, arrow: Arrow) -> Result<Self, LabelError> {
        let bad = || LabelError::InvalidLabel {
            two_j,
            two_mu,
            two_n,
        };
        if two_j < 0
            || two_mu.abs() > two_j
            || (two_mu - two_j) % 2 != 0
            || (two_n - two_j - 1) % 2 != 0
        {
            return Err(bad());
        }
        let bound = n_bound(two_j as u32, arrow).ok_or_else(bad)?;
        if two_n.abs() > bound as i64 {
            return Err(bad());
        }
        Ok(Self {
            two_j: two_j as u32,
            arrow,
            two_mu: two_mu as i32,
            two_n: two_n as i32,
        })
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.two_j as i64)
    }

    pub fn mu(&self) -> HalfInt {
        HalfInt::from_twice(self.two_mu as i64)
    }

    pub fn n(&self) -> HalfInt {
        HalfInt::from_twice(self.two_n as i64)
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.arrow {
            Arrow::Up => "up",
            Arrow::Down => "down",
        };
        write!(f, "|{}, {}, {}, {}>", self.j(), self.mu(), self.n(), arrow)
    }
}

/// All basis vectors with `two_j <= two_jmax`, in (two_j, arrow, two_mu, two_n) order.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    two_jmax: u32,
    vectors: Vec<BasisVector>,
    index: HashMap<BasisVector, usize>,
    level_start: Vec<usize>,
}

impl TruncatedBasis {
    pub fn two_jmax(&self) -> u32 {
        self.two_jmax
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BasisVector] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> BasisVector {
        self.vectors[i]
    }

    pub fn index_of(&self, v: &BasisVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Index of the label if it is legal and inside the truncation.
    pub fn find(&self, two_j: i64, arrow: Arrow, two_mu: i64, two_n: i64) -> Option<usize> {
        if two_j < 0 || two_j > self.two_jmax as i64 {
            return None;
        }
        let v = BasisVector::new(two_j, two_mu, two_n, arrow).ok()?;
        self.index_of(&v)
    }

    /// Indices of all vectors with the given `two_j`.
    pub fn level(&self, two_j: u32) -> Range<usize> {
        if two_j > self.two_jmax {
            return self.len()..self.len();
        }
        self.level_start[two_j as usize]..self.level_start[two_j as usize + 1]
    }

    /// Indices with `two_j <= bound`.
    pub fn up_to(&self, bound: i64) -> Range<usize> {
        if bound < 0 {
            return 0..0;
        }
        let b = bound.min(self.two_jmax as i64) as usize;
        0..self.level_start[b + 1]
    }
}

/// Dimension of the slice `2j <= two_jmax`.
pub fn basis_size(two_jmax: u32) -> usize {
    (0..=two_jmax as usize)
        .map(|t| (t + 1) * (t + 2) + (t + 1) * t)
        .sum()
}

pub fn enumerate_basis(two_jmax: u32) -> TruncatedBasis {
    let mut vectors = Vec::with_capacity(basis_size(two_jmax));
    let mut level_start = Vec::with_capacity(two_jmax as usize + 2);
    for two_j in 0..=two_jmax {
        level_start.push(vectors.len());
        for arrow in [Arrow::Up, Arrow::Down] {
            let Some(nb) = n_bound(two_j, arrow) else {
                continue;
            };
            for two_mu in (-(two_j as i32)..=two_j as i32).step_by(2) {
                for two_n in (-nb..=nb).step_by(2) {
                    vectors.push(BasisVector {
                        two_j,
                        arrow,
                        two_mu,
                        two_n,
                    });
                }
            }
        }
    }
    level_start.push(vectors.len());
    let index = vectors.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    TruncatedBasis {
        two_jmax,
        vectors,
        index,
        level_start,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let b0 = enumerate_basis(0);
        assert_eq!(b0.len(), 2);
        assert!(b0
            .vectors()
            .iter()
            .all(|v| v.two_j == 0 && v.two_mu == 0 && v.two_n.abs() == 1));
        assert_eq!(enumerate_basis(1).len(), 10);
    }

    #[test]
    fn per_level_counts() {
        let b = enumerate_basis(9);
        for t in 0..=9usize {
            let lvl = b.level(t as u32);
            let up = lvl.clone().filter(|&i| b.get(i).arrow == Arrow::Up).count();
            let down = lvl.len() - up;
            assert_eq!(up, (t + 1) * (t + 2));
            assert_eq!(down, (t + 1) * t);
        }
        assert_eq!(b.len(), basis_size(9));
    }

    #[test]
    fn ordering_is_lexicographic() {
        let b = enumerate_basis(6);
        assert!(b.vectors().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_labels() {
        assert!(BasisVector::new(0, 0, 1, Arrow::Up).is_ok());
        assert!(BasisVector::new(0, 0, 1, Arrow::Down).is_err());
        assert!(BasisVector::new(1, 1, 2, Arrow::Down).is_err());
        assert!(BasisVector::new(1, 1, 0, Arrow::Down).is_ok());
        assert!(BasisVector::new(2, 1, 1, Arrow::Up).is_err());
        assert!(BasisVector::new(2, 0, 4, Arrow::Up).is_err());
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(-4).to_string(), "-2");
    }
}
