//! Partitions of unity in `A_k A_{-k}`: the q = 0 construction and bounded
//! exact searches at q > 0.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::{solve_in_span, Combination};
use super::{words, ConnectionTerm};
use crate::error::{AlgebraError, QArithError};
use crate::ncalgebra::q0::Q0Poly;
use crate::ncalgebra::{check_coprime, homogeneous_degree, multiply, word, Gen, Monomial, NCPoly};
use crate::qarith::QLaurent;

use Gen::*;

fn word_string(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|g| g.name()).collect()
}

/// `(a-charge, b-charge)` of a word.
fn charges(w: &[Gen]) -> (i64, i64) {
    w.iter().fold((0, 0), |(ka, kb), g| match g {
        A => (ka + 1, kb),
        AStar => (ka - 1, kb),
        B => (ka, kb + 1),
        BStar => (ka, kb - 1),
    })
}

fn word_degree(w: &[Gen], p: u32, r: i64) -> Option<i64> {
    let (ka, kb) = charges(w);
    let t = ka + r * kb;
    (t.rem_euclid(p as i64) == 0).then_some(t / p as i64)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Q0Partition {
    pub p: u32,
    pub r: i64,
    /// `α^{p-p1} β^{p1} (α*)^{(r-1)p1}` and `α^{(r-1)p1} (β*)^{p1} (α*)^{p-p1}`.
    pub words: Vec<(String, String)>,
    /// The same words normal-ordered at generic q.
    pub terms: Vec<ConnectionTerm>,
    pub sum_is_one: bool,
    /// `(α*)^p α^p = 1` at q = 0.
    pub positive_identity: bool,
    /// Left words of degree +1, right words of degree -1.
    pub degrees_ok: bool,
    pub verified: bool,
    /// Whether the same sum equals 1 at q = 1/2.
    pub sum_is_one_at_half: bool,
}

pub fn q0_partition(p: u32, r: i64) -> Result<Q0Partition, AlgebraError> {
    check_coprime(p, r)?;
    if r <= 0 {
        return Err(AlgebraError::NotCoprime { p, r });
    }
    let rr = r as u32 - 1;
    let pairs: Vec<(Vec<Gen>, Vec<Gen>)> = (0..=p)
        .map(|p1| {
            (
                words(&[(A, p - p1), (B, p1), (AStar, rr * p1)]),
                words(&[(A, rr * p1), (BStar, p1), (AStar, p - p1)]),
            )
        })
        .collect();
    let sum_q0 = pairs.iter().fold(Q0Poly::zero(), |acc, (x, y)| {
        let mut w = x.clone();
        w.extend(y);
        acc.add(&Q0Poly::word(&w))
    });
    let positive_identity = Q0Poly::word(&words(&[(AStar, p), (A, p)])).is_one();
    let terms: Vec<ConnectionTerm> = pairs
        .par_iter()
        .map(|(x, y)| ConnectionTerm::new(word(x), word(y)))
        .collect();
    let degrees_ok = pairs
        .iter()
        .all(|(x, y)| word_degree(x, p, r) == Some(1) && word_degree(y, p, r) == Some(-1))
        && terms.iter().all(|t| {
            matches!(homogeneous_degree(&t.left, p, r), Ok(Some(1)))
                && matches!(homogeneous_degree(&t.right, p, r), Ok(Some(-1)))
        });
    let generic = terms
        .iter()
        .fold(NCPoly::zero(), |acc, t| acc.add(&t.product()));
    let half = BigRational::new(1.into(), 2.into());
    let sum_is_one_at_half = generic.terms().all(|(mon, c)| {
        let v = c.eval_exact(&half).expect("q = 1/2 is in range");
        if *mon == Monomial::ONE {
            v.is_one()
        } else {
            v.is_zero()
        }
    }) && !generic.coeff(&Monomial::ONE).is_zero();
    let sum_is_one = sum_q0.is_one();
    Ok(Q0Partition {
        p,
        r,
        words: pairs
            .iter()
            .map(|(x, y)| (word_string(x), word_string(y)))
            .collect(),
        terms,
        sum_is_one,
        positive_identity,
        degrees_ok,
        verified: sum_is_one && positive_identity && degrees_ok,
        sum_is_one_at_half,
    })
}

/// `coeff * left * right` in a partition of unity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeProbe {
    pub left_degree: i64,
    pub right_degree: i64,
    pub candidates: usize,
    pub rank: usize,
    pub found: bool,
    /// Common denominator of the witness coefficients.
    pub denominator: Option<String>,
    pub witness: Vec<WitnessTerm>,
    /// The witness recomputed independently of the solver.
    pub verified: bool,
    /// Witness numerators on normal-ordered pairs, empty at q = 0.
    #[serde(skip)]
    pub pairs: Vec<(Monomial, Monomial, QLaurent)>,
    #[serde(skip)]
    pub pair_denominator: Option<QLaurent>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StronglyGradedReport {
    pub p: u32,
    pub r: i64,
    pub q: f64,
    pub degree_bound: u32,
    pub length_bound: u32,
    pub probes: Vec<DegreeProbe>,
    pub all_found: bool,
    pub note: String,
}

/// Normal-ordered monomials of U(1) degree `d` and length at most `len`.
fn monomials_of_degree(d: i64, p: u32, r: i64, len: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for l in 0..=len {
        for m in 0..=len - l {
            let k = d * p as i64 - r * (l as i64 - m as i64);
            if k.unsigned_abs() + (l + m) as u64 <= len as u64 {
                out.push(Monomial::new(k, l, m));
            }
        }
    }
    out
}

/// Reduced words `a^i W (a*)^s` at q = 0, `W` one of `b^l`, `(b*)^m`, `bb*`.
fn q0_words_of_degree(d: i64, p: u32, r: i64, len: u32) -> Vec<Vec<Gen>> {
    let mut middles: Vec<Vec<Gen>> = (0..=len).map(|l| vec![B; l as usize]).collect();
    middles.extend((1..=len).map(|m| vec![BStar; m as usize]));
    middles.push(vec![B, BStar]);
    let mut out = Vec::new();
    for mid in &middles {
        let Some(rest) = len.checked_sub(mid.len() as u32) else {
            continue;
        };
        for i in 0..=rest {
            for s in 0..=rest - i {
                if mid.is_empty() && i > 0 && s > 0 {
                    continue;
                }
                let mut w = vec![A; i as usize];
                w.extend(mid);
                w.extend(vec![AStar; s as usize]);
                if word_degree(&w, p, r) == Some(d) {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn rational_of(q: f64) -> Result<BigRational, QArithError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(QArithError::Domain(q));
    }
    BigRational::from_float(q).ok_or(QArithError::Domain(q))
}

fn witness_terms<R: std::fmt::Display, L, F: Fn(&L) -> String>(
    pairs: &[(L, L)],
    sol: &Combination<R>,
    is_zero: impl Fn(&R) -> bool,
    show: F,
) -> Vec<WitnessTerm> {
    pairs
        .iter()
        .zip(&sol.numerators)
        .filter(|(_, c)| !is_zero(c))
        .map(|((x, y), c)| WitnessTerm {
            left: show(x),
            right: show(y),
            coeff: c.to_string(),
        })
        .collect()
}

/// Searches `A_{left} A_{right}` at a rational `q > 0`.
fn probe_rational(p: u32, r: i64, q: &BigRational, left: i64, len: u32) -> DegreeProbe {
    let xs = monomials_of_degree(left, p, r, len);
    let ys = monomials_of_degree(-left, p, r, len);
    let pairs: Vec<(Monomial, Monomial)> = xs
        .iter()
        .flat_map(|x| ys.iter().filter(|y| y.k == -x.k).map(move |y| (*x, *y)))
        .collect();
    let eval = |x: &NCPoly| -> BTreeMap<Monomial, BigRational> {
        x.terms()
            .map(|(m, c)| (*m, c.eval_exact(q).expect("q > 0")))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    };
    let products: Vec<NCPoly> = pairs
        .par_iter()
        .map(|(x, y)| multiply(&NCPoly::basis(x.k, x.l, x.m), &NCPoly::basis(y.k, y.l, y.m)))
        .collect();
    let columns: Vec<_> = products.iter().map(eval).collect();
    let target = BTreeMap::from([(Monomial::ONE, BigRational::one())]);
    let (rank, sol) = solve_in_span(&columns, &target);
    let mut probe = DegreeProbe {
        left_degree: left,
        right_degree: -left,
        candidates: pairs.len(),
        rank,
        found: sol.is_some(),
        denominator: None,
        witness: Vec::new(),
        verified: false,
        pairs: Vec::new(),
        pair_denominator: None,
    };
    if let Some(sol) = sol {
        let mut total = NCPoly::zero();
        for (prod, c) in products.iter().zip(&sol.numerators) {
            if !c.is_zero() {
                total = total.add(&prod.scale(&QLaurent::constant(c.clone())));
            }
        }
        probe.verified = eval(&total) == BTreeMap::from([(Monomial::ONE, sol.denominator.clone())]);
        probe.witness = witness_terms(&pairs, &sol, |c| c.is_zero(), |m| m.to_string());
        probe.denominator = Some(sol.denominator.to_string());
        probe.pairs = pairs
            .iter()
            .zip(&sol.numerators)
            .filter(|(_, c)| !c.is_zero())
            .map(|((x, y), c)| (*x, *y, QLaurent::constant(c.clone())))
            .collect();
        probe.pair_denominator = Some(QLaurent::constant(sol.denominator.clone()));
    }
    probe
}

/// Same search in the q = 0 algebra, over reduced words.
fn probe_q0(p: u32, r: i64, left: i64, len: u32) -> DegreeProbe {
    let xs = q0_words_of_degree(left, p, r, len);
    let ys = q0_words_of_degree(-left, p, r, len);
    let pairs: Vec<(Vec<Gen>, Vec<Gen>)> = xs
        .iter()
        .flat_map(|x| {
            let cx = charges(x);
            ys.iter()
                .filter(move |y| charges(y).0 == -cx.0)
                .map(move |y| (x.clone(), y.clone()))
        })
        .collect();
    let products: Vec<Q0Poly> = pairs
        .par_iter()
        .map(|(x, y)| {
            let mut w = x.clone();
            w.extend(y);
            Q0Poly::word(&w)
        })
        .collect();
    let columns: Vec<BTreeMap<Vec<Gen>, BigRational>> = products
        .iter()
        .map(|x| x.terms().map(|(w, c)| (w.clone(), c.clone())).collect())
        .collect();
    let target = BTreeMap::from([(Vec::new(), BigRational::one())]);
    let (rank, sol) = solve_in_span(&columns, &target);
    let mut probe = DegreeProbe {
        left_degree: left,
        right_degree: -left,
        candidates: pairs.len(),
        rank,
        found: sol.is_some(),
        denominator: None,
        witness: Vec::new(),
        verified: false,
        pairs: Vec::new(),
        pair_denominator: None,
    };
    if let Some(sol) = sol {
        let total = products
            .iter()
            .zip(&sol.numerators)
            .fold(Q0Poly::zero(), |acc, (x, c)| acc.add(&x.scale(c)));
        probe.verified = total.sub(&Q0Poly::one().scale(&sol.denominator)).is_zero();
        probe.witness = witness_terms(&pairs, &sol, |c| c.is_zero(), |w| word_string(w));
        probe.denominator = Some(sol.denominator.to_string());
    }
    probe
}

/// Bounded search for `1 ∈ A_k A_{-k}` and `1 ∈ A_{-k} A_k`, `1 <= k <= degree_bound`.
pub fn strongly_graded_check(
    p: u32,
    r: i64,
    q: f64,
    degree_bound: u32,
    length_bound: u32,
) -> Result<StronglyGradedReport, crate::error::BundleError> {
    check_coprime(p, r)?;
    let qr = rational_of(q)?;
    let probes: Vec<DegreeProbe> = (1..=degree_bound as i64)
        .flat_map(|k| [k, -k])
        .map(|left| {
            if q == 0.0 {
                probe_q0(p, r, left, length_bound)
            } else {
                probe_rational(p, r, &qr, left, length_bound)
            }
        })
        .collect();
    let all_found = probes.iter().all(|pr| pr.found && pr.verified);
    let note = if all_found {
        "partition of unity found in every probed degree".to_string()
    } else {
        format!("no witness within length bound {length_bound} for some degree; bounded search, not a proof")
    };
    Ok(StronglyGradedReport {
        p,
        r,
        q,
        degree_bound,
        length_bound,
        probes,
        all_found,
        note,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub p: u32,
    pub r: i64,
    pub degree_bound: u32,
    /// Pairs `x ⊗ y` with `deg x = -1`, `deg y = 1`, `k_x = -k_y`.
    pub candidates: usize,
    pub rank: usize,
    /// Whether `1 ⊗ u` is in the image of the canonical map within the bound.
    pub feasible: bool,
    pub denominator: Option<String>,
    pub witness: Vec<WitnessTerm>,
    pub verified: bool,
    pub note: String,
    /// Witness numerators as Laurent polynomials in q.
    #[serde(skip)]
    pub pairs: Vec<(Monomial, Monomial, QLaurent)>,
    #[serde(skip)]
    pub pair_denominator: Option<QLaurent>,
}

/// Exact test, over Laurent polynomials in q, for `sum x_i y_i = 1` with
/// `deg x_i = -1`, `deg y_i = 1` and total word length at most `degree_bound`.
pub fn canonical_obstruction_probe(
    p: u32,
    r: i64,
    degree_bound: u32,
) -> Result<ObstructionReport, AlgebraError> {
    check_coprime(p, r)?;
    let xs = monomials_of_degree(-1, p, r, degree_bound);
    let ys = monomials_of_degree(1, p, r, degree_bound);
    let pairs: Vec<(Monomial, Monomial)> = xs
        .iter()
        .flat_map(|x| {
            ys.iter()
                .filter(move |y| y.k == -x.k && x.len() + y.len() <= degree_bound as usize)
                .map(move |y| (*x, *y))
        })
        .collect();
    let products: Vec<NCPoly> = pairs
        .par_iter()
        .map(|(x, y)| multiply(&NCPoly::basis(x.k, x.l, x.m), &NCPoly::basis(y.k, y.l, y.m)))
        .collect();
    let columns: Vec<BTreeMap<Monomial, QLaurent>> = products
        .iter()
        .map(|x| x.terms().map(|(m, c)| (*m, c.clone())).collect())
        .collect();
    let target = BTreeMap::from([(Monomial::ONE, QLaurent::one())]);
    let (rank, sol) = solve_in_span(&columns, &target);
    let mut report = ObstructionReport {
        p,
        r,
        degree_bound,
        candidates: pairs.len(),
        rank,
        feasible: sol.is_some(),
        denominator: None,
        witness: Vec::new(),
        verified: false,
        note: String::new(),
        pairs: Vec::new(),
        pair_denominator: None,
    };
    match sol {
        Some(sol) => {
            let total = products
                .iter()
                .zip(&sol.numerators)
                .fold(NCPoly::zero(), |acc, (x, c)| acc.add(&x.scale(c)));
            report.verified = total
                .sub(&NCPoly::constant(sol.denominator.clone()))
                .is_zero();
            report.witness = witness_terms(&pairs, &sol, |c| c.is_zero(), |m| m.to_string());
            report.denominator = Some(sol.denominator.to_string());
            report.pairs = pairs
                .iter()
                .zip(&sol.numerators)
                .filter(|(_, c)| !c.is_zero())
                .map(|((x, y), c)| (*x, *y, c.clone()))
                .collect();
            report.pair_denominator = Some(sol.denominator.clone());
            report.note =
                "1 ⊗ u is reached within the bound; the witness is verified in the engine".into();
        }
        None => {
            report.note =
                format!("no preimage of 1 ⊗ u with total length <= {degree_bound}; bounded search");
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_partition_small() {
        let part = q0_partition(2, 1).unwrap();
        assert!(part.verified);
        let part = q0_partition(3, 2).unwrap();
        assert!(part.verified);
        assert!(!part.sum_is_one_at_half);
    }

    #[test]
    fn reduced_words_are_reduced() {
        for w in q0_words_of_degree(1, 3, 2, 6) {
            let red = Q0Poly::word(&w);
            assert_eq!(red.terms().count(), 1);
            assert_eq!(red.terms().next().unwrap().0, &w);
        }
    }

    #[test]
    fn r1_control_is_feasible() {
        let rep = canonical_obstruction_probe(2, 1, 4).unwrap();
        assert!(rep.feasible && rep.verified);
        let sg = strongly_graded_check(2, 1, 0.5, 1, 4).unwrap();
        assert!(sg.all_found);
    }

    #[test]
    fn q0_strong_grading() {
        let sg = strongly_graded_check(5, 3, 0.0, 1, 8).unwrap();
        assert!(sg.all_found, "{:?}", sg.probes);
    }
}
