//! The crystal limit q = 0, where normal ordering by `e_{klm}` breaks down.
//!
//! Rewriting rules (each one a consequence of the relations at q = 0):
//! `ba, b*a, a*b, a*b* -> 0`, `a*a -> 1`, `aa* -> 1 - bb*`, `b*b -> bb*`,
//! `bbb* -> b`, `bb*b* -> b*`.
//! The measure (number of a-letters, length, b*b inversions) strictly
//! decreases, so rewriting terminates; all overlaps resolve.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Gen::{self, *};

/// Element of the q = 0 algebra as a combination of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Q0Poly {
    terms: BTreeMap<Vec<Gen>, BigRational>,
}

enum Step {
    Zero,
    Replace(Vec<(Vec<Gen>, i64)>),
}

fn rewrite_at(w: &[Gen]) -> Option<(usize, usize, Step)> {
    for i in 0..w.len() {
        if i + 1 < w.len() {
            let pair = (w[i], w[i + 1]);
            let step = match pair {
                (B, A) | (BStar, A) | (AStar, B) | (AStar, BStar) => Some(Step::Zero),
                (AStar, A) => Some(Step::Replace(vec![(vec![], 1)])),
                (A, AStar) => Some(Step::Replace(vec![(vec![], 1), (vec![B, BStar], -1)])),
                (BStar, B) => Some(Step::Replace(vec![(vec![B, BStar], 1)])),
                _ => None,
            };
            if let Some(s) = step {
                return Some((i, 2, s));
            }
        }
        if i + 2 < w.len() {
            match (w[i], w[i + 1], w[i + 2]) {
                (B, B, BStar) => return Some((i, 3, Step::Replace(vec![(vec![B], 1)]))),
                (B, BStar, BStar) => return Some((i, 3, Step::Replace(vec![(vec![BStar], 1)]))),
                _ => {}
            }
        }
    }
    None
}

impl Q0Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(&[])
    }

    /// Reduced form of a single word.
    pub fn word(letters: &[Gen]) -> Self {
        let mut out = Self::zero();
        out.push_reduced(letters.to_vec(), BigRational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &BigRational)> {
        self.terms.iter()
    }

    fn add_raw(&mut self, w: Vec<Gen>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(w.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn push_reduced(&mut self, w: Vec<Gen>, c: BigRational) {
        let mut stack = vec![(w, c)];
        while let Some((w, c)) = stack.pop() {
            match rewrite_at(&w) {
                None => self.add_raw(w, c),
                Some((_, _, Step::Zero)) => {}
                Some((i, len, Step::Replace(reps))) => {
                    for (rep, sign) in reps {
                        let mut nw = w[..i].to_vec();
                        nw.extend(rep);
                        nw.extend_from_slice(&w[i + len..]);
                        stack.push((nw, &c * BigRational::from_integer(sign.into())));
                    }
                }
            }
        }
    }

    pub fn add(&self, other: &Q0Poly) -> Q0Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_raw(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Q0Poly) -> Q0Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_raw(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Q0Poly {
        let mut out = Q0Poly::zero();
        for (w, v) in &self.terms {
            out.add_raw(w.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Q0Poly) -> Q0Poly {
        let mut out = Q0Poly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push_reduced(w, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Q0Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if w.is_empty() {
                write!(f, "1")?;
            }
            for g in w {
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_relations() {
        assert!(Q0Poly::word(&[AStar, A]).is_one());
        let s = Q0Poly::word(&[A, AStar]).add(&Q0Poly::word(&[B, BStar]));
        assert!(s.is_one());
        assert!(Q0Poly::word(&[B, A]).is_zero());
        assert_eq!(Q0Poly::word(&[BStar, B]), Q0Poly::word(&[B, BStar]));
    }

    #[test]
    fn projection_bb_star() {
        let x = Q0Poly::word(&[B, BStar]);
        assert_eq!(x.mul(&x), x);
    }

    #[test]
    fn overlaps_resolve() {
        let words: [&[Gen]; 6] = [
            &[AStar, A, AStar],
            &[A, AStar, A],
            &[B, B, BStar, BStar],
            &[BStar, B, BStar],
            &[B, BStar, B],
            &[A, AStar, B, BStar],
        ];
        for w in words {
            for split in 0..=w.len() {
                let lhs = Q0Poly::word(&w[..split]).mul(&Q0Poly::word(&w[split..]));
                assert_eq!(lhs, Q0Poly::word(w), "{w:?} split at {split}");
            }
        }
    }
}
