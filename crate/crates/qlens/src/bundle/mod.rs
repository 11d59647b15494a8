//! Principal U(1)-bundle identities for `L_q(p, r)` over the teardrops,
//! checked exactly in the rewriting engine.

pub mod linalg;
mod partition;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::ncalgebra::{
    check_coprime, homogeneous_degree, multiply, normal_form, product, word, Gen, GenWord,
    Monomial, NCPoly,
};
use crate::qarith::QLaurent;

pub use partition::{
    canonical_obstruction_probe, q0_partition, strongly_graded_check, DegreeProbe,
    ObstructionReport, Q0Partition, StronglyGradedReport, WitnessTerm,
};

use Gen::*;

/// A homogeneous element of the U(1) grading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedElement {
    pub poly: NCPoly,
    pub degree: i64,
}

impl GradedElement {
    pub fn new(poly: NCPoly, p: u32, r: i64) -> Result<Self, AlgebraError> {
        match homogeneous_degree(&poly, p, r)? {
            Some(degree) => Ok(Self { poly, degree }),
            None if poly.is_zero() => Ok(Self { poly, degree: 0 }),
            None => {
                let mon = poly.monomials().next().copied().unwrap_or(Monomial::ONE);
                Err(AlgebraError::NotHomogeneous {
                    k: mon.k,
                    l: mon.l,
                    m: mon.m,
                    p,
                    r,
                })
            }
        }
    }
}

/// One summand `left ⊗ right` of a connection or partition of unity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionTerm {
    pub left: NCPoly,
    pub right: NCPoly,
}

impl ConnectionTerm {
    pub fn new(left: NCPoly, right: NCPoly) -> Self {
        Self { left, right }
    }

    pub fn product(&self) -> NCPoly {
        multiply(&self.left, &self.right)
    }
}

fn pow_word(g: Gen, n: u32) -> Vec<Gen> {
    vec![g; n as usize]
}

fn words(parts: &[(Gen, u32)]) -> Vec<Gen> {
    parts.iter().flat_map(|&(g, n)| pow_word(g, n)).collect()
}

fn sum(polys: impl IntoIterator<Item = NCPoly>) -> NCPoly {
    polys.into_iter().fold(NCPoly::zero(), |acc, x| acc.add(&x))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreenessWitness {
    pub p: u32,
    pub r: i64,
    /// `P` with `a^r (a*)^r + b P = 1`.
    pub witness: NCPoly,
    pub verified: bool,
}

/// Splits `1 - a^r (a*)^r` as `b P`.
pub fn freeness_witness(p: u32, r: i64) -> Result<FreenessWitness, AlgebraError> {
    check_coprime(p, r)?;
    if r <= 0 {
        return Err(AlgebraError::NotCoprime { p, r });
    }
    let ar = word(&words(&[(A, r as u32), (AStar, r as u32)]));
    let rest = NCPoly::one().sub(&ar);
    let mut witness = NCPoly::zero();
    let mut divisible = true;
    for (mon, c) in rest.terms() {
        if mon.l == 0 {
            divisible = false;
            continue;
        }
        // a^k b = q^{-k} b a^k for k >= 0; for k < 0 the b already leads.
        let c = if mon.k >= 0 {
            c.shift(-mon.k)
        } else {
            c.clone()
        };
        witness.add_term(Monomial::new(mon.k, mon.l - 1, mon.m), c);
    }
    let verified = divisible && ar.add(&multiply(&NCPoly::gen(B), &witness)).is_one();
    Ok(FreenessWitness {
        p,
        r,
        witness,
        verified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// From `(a*a + q^2 b*b)^p`.
    Left,
    /// From `(aa* + bb*)^p`.
    Right,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnityExpansion {
    pub p: u32,
    pub side: Side,
    /// `c_1, ..., c_p`.
    pub coefficients: Vec<QLaurent>,
    pub reconstructs_one: bool,
}

impl UnityExpansion {
    /// The `p1`-th summand, `p1 = 0` being the leading one.
    pub fn summand(&self, p1: u32) -> NCPoly {
        let p = self.p;
        let lead = match self.side {
            Side::Left => word(&words(&[
                (AStar, p - p1),
                (A, p - p1),
                (BStar, p1),
                (B, p1),
            ])),
            Side::Right => word(&words(&[
                (A, p - p1),
                (AStar, p - p1),
                (BStar, p1),
                (B, p1),
            ])),
        };
        if p1 == 0 {
            lead
        } else {
            lead.scale(&self.coefficients[p1 as usize - 1])
        }
    }
}

/// Coefficients with `lead + sum_{p1} c_{p1} (...) (b*b)^{p1} = 1`.
///
/// Each summand is a polynomial in `X = bb*` whose lowest term is `X^{p1}`
/// with coefficient 1, so the `c`'s come out triangularly.
pub fn expand_unity_power(p: u32, side: Side) -> UnityExpansion {
    let mut exp = UnityExpansion {
        p,
        side,
        coefficients: Vec::new(),
        reconstructs_one: false,
    };
    let mut rest = NCPoly::one().sub(&exp.summand(0));
    for p1 in 1..=p {
        exp.coefficients.push(QLaurent::one());
        let unit = exp.summand(p1);
        let x = Monomial::new(0, p1, p1);
        let c = rest
            .coeff(&x)
            .div_exact(&unit.coeff(&x))
            .expect("leading coefficient is a unit");
        rest = rest.sub(&unit.scale(&c));
        exp.coefficients[p1 as usize - 1] = c;
    }
    exp.reconstructs_one = sum((0..=p).map(|p1| exp.summand(p1))).is_one();
    exp
}

/// `omega(u^n)` for `n` in `1..=n_max` and `-n_max..=-1`, plus `omega(1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrongConnection {
    pub p: u32,
    pub terms: BTreeMap<i64, Vec<ConnectionTerm>>,
}

/// Factors `(a_i, b_i)` with `sum a_i b_i = 1` and `(b'_i, a'_i)` with `sum b'_i a'_i = 1`.
fn unity_factors(p: u32) -> (Vec<ConnectionTerm>, Vec<ConnectionTerm>) {
    let left = expand_unity_power(p, Side::Left);
    let right = expand_unity_power(p, Side::Right);
    let mut pos = vec![ConnectionTerm::new(
        word(&pow_word(AStar, p)),
        word(&pow_word(A, p)),
    )];
    let mut neg = vec![ConnectionTerm::new(
        word(&pow_word(A, p)),
        word(&pow_word(AStar, p)),
    )];
    for p1 in 1..=p {
        let s = (p1 * (p - p1)) as i64;
        let c = left.coefficients[p1 as usize - 1].shift(-s);
        pos.push(ConnectionTerm::new(
            word(&words(&[(AStar, p - p1), (BStar, p1)])).scale(&c),
            word(&words(&[(A, p - p1), (B, p1)])),
        ));
        let c = right.coefficients[p1 as usize - 1].shift(2 * s);
        neg.push(ConnectionTerm::new(
            word(&words(&[(A, p - p1), (B, p1)])),
            word(&words(&[(BStar, p1), (AStar, p - p1)])).scale(&c),
        ));
    }
    (pos, neg)
}

fn extend(prev: &[ConnectionTerm], factors: &[ConnectionTerm]) -> Vec<ConnectionTerm> {
    factors
        .par_iter()
        .flat_map_iter(|f| {
            prev.iter().map(move |t| {
                ConnectionTerm::new(multiply(&f.left, &t.left), multiply(&t.right, &f.right))
            })
        })
        .collect()
}

/// The recursive strong connection for `r = 1`.
pub fn strong_connection_r1(p: u32, n_max: u32) -> StrongConnection {
    let (pos, neg) = unity_factors(p);
    let mut terms = BTreeMap::new();
    let unit = vec![ConnectionTerm::new(NCPoly::one(), NCPoly::one())];
    terms.insert(0, unit.clone());
    let (mut up, mut down) = (unit.clone(), unit);
    for n in 1..=n_max as i64 {
        up = extend(&up, &pos);
        down = extend(&down, &neg);
        terms.insert(n, up.clone());
        terms.insert(-n, down.clone());
    }
    StrongConnection { p, terms }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectionCheck {
    pub n: i64,
    pub terms: usize,
    pub multiplies_to_one: bool,
    pub homogeneous: bool,
    /// Degree of every left factor, when it is common to all terms.
    pub left_degree: Option<i64>,
    pub right_degree: Option<i64>,
    /// Left and right degrees are `∓n` (left factor negative for `u^n`).
    pub left_negative: bool,
    /// Left and right degrees are `±n`.
    pub left_positive: bool,
}

impl ConnectionCheck {
    pub fn passed(&self) -> bool {
        self.multiplies_to_one && self.homogeneous && (self.left_negative || self.left_positive)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectionReport {
    pub p: u32,
    pub r: i64,
    pub checks: Vec<ConnectionCheck>,
    pub passed: bool,
}

fn common_degree(
    polys: impl Iterator<Item = Result<Option<i64>, AlgebraError>>,
) -> (bool, Option<i64>) {
    let mut deg = None;
    for d in polys {
        match d {
            Ok(Some(d)) if deg.is_none() || deg == Some(d) => deg = Some(d),
            Ok(None) => {}
            _ => return (false, None),
        }
    }
    (true, deg)
}

/// Checks a list of terms for the degree-`n` component of a connection.
pub fn check_connection_terms(terms: &[ConnectionTerm], n: i64, p: u32, r: i64) -> ConnectionCheck {
    let total = sum(terms
        .par_iter()
        .map(ConnectionTerm::product)
        .collect::<Vec<_>>());
    let (lh, left_degree) = common_degree(terms.iter().map(|t| homogeneous_degree(&t.left, p, r)));
    let (rh, right_degree) =
        common_degree(terms.iter().map(|t| homogeneous_degree(&t.right, p, r)));
    let mixed = terms.iter().any(|t| {
        matches!(homogeneous_degree(&t.left, p, r), Ok(None)) && !t.left.is_zero()
            || matches!(homogeneous_degree(&t.right, p, r), Ok(None)) && !t.right.is_zero()
    });
    let homogeneous = lh && rh && !mixed;
    ConnectionCheck {
        n,
        terms: terms.len(),
        multiplies_to_one: total.is_one(),
        homogeneous,
        left_degree,
        right_degree,
        left_negative: homogeneous && left_degree == Some(-n) && right_degree == Some(n),
        left_positive: homogeneous && left_degree == Some(n) && right_degree == Some(-n),
    }
}

pub fn verify_strong_connection(conn: &StrongConnection, r: i64) -> ConnectionReport {
    let checks: Vec<_> = conn
        .terms
        .iter()
        .map(|(&n, terms)| check_connection_terms(terms, n, conn.p, r))
        .collect();
    let passed = checks.iter().all(ConnectionCheck::passed);
    ConnectionReport {
        p: conn.p,
        r,
        checks,
        passed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeardropParams {
    pub r1: u32,
    pub r2: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TeardropRelation {
    pub name: String,
    /// As displayed for the teardrop algebra.
    pub literal: bool,
    /// With `q -> 1/q`, matching the conventions of the rewriting engine.
    pub inverted_q: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TeardropReport {
    pub r1: u32,
    pub r2: u32,
    pub relations: Vec<TeardropRelation>,
    pub verified: bool,
}

fn poly_in(x: &NCPoly, coeffs: &[(u32, QLaurent)]) -> NCPoly {
    sum(coeffs.iter().map(|(e, c)| x.pow(*e).scale(c)))
}

/// `a^{r1} prod_{m in ms} (1 - q^{2m} a)` with an optional overall power of q.
fn teardrop_poly(a: &NCPoly, r1: u32, ms: impl Iterator<Item = i64>, prefactor: i64) -> NCPoly {
    let mut coeffs = vec![(r1, QLaurent::q_pow(prefactor))];
    for m in ms {
        let mut next = coeffs.clone();
        for (e, c) in &coeffs {
            next.push((e + 1, -(c * &QLaurent::q_pow(2 * m))));
        }
        coeffs = next;
    }
    poly_in(a, &coeffs)
}

/// The teardrop generators `a = ββ*`, `b = α^{r2} (β*)^{r1}` and their relations.
pub fn teardrop_relations(params: TeardropParams) -> TeardropReport {
    let TeardropParams { r1, r2 } = params;
    let a = word(&[B, BStar]);
    let b = word(&words(&[(A, r2), (BStar, r1)]));
    let bs = crate::ncalgebra::star(&b);
    let s = (r1 * r2) as i64;
    let bbs = product([&b, &bs]);
    let bsb = product([&bs, &b]);
    let ab = product([&a, &b]);
    let ba = product([&b, &a]);
    let eq = |x: &NCPoly, y: &NCPoly| x.sub(y).is_zero();
    let pair = |name: &str, literal: bool, inverted_q: bool| TeardropRelation {
        name: name.into(),
        literal,
        inverted_q,
    };
    let sign = |inv: bool| if inv { -1 } else { 1 };
    let bbs_rhs = |inv: bool| {
        teardrop_poly(
            &a,
            r1,
            (0..r2 as i64).map(|m| sign(inv) * m),
            sign(inv) * 2 * s,
        )
    };
    let bsb_rhs = |inv: bool| teardrop_poly(&a, r1, (1..=r2 as i64).map(|m| -sign(inv) * m), 0);
    let ab_rhs = |inv: bool| ba.scale(&QLaurent::q_pow(-sign(inv) * 2 * r2 as i64));
    let relations = vec![
        pair(
            "a = a*",
            eq(&crate::ncalgebra::star(&a), &a),
            eq(&crate::ncalgebra::star(&a), &a),
        ),
        pair(
            "bb* = q^{2 r1 r2} a^{r1} prod_{m=0}^{r2-1} (1 - q^{2m} a)",
            eq(&bbs, &bbs_rhs(false)),
            eq(&bbs, &bbs_rhs(true)),
        ),
        pair(
            "ab = q^{-2 r2} ba",
            eq(&ab, &ab_rhs(false)),
            eq(&ab, &ab_rhs(true)),
        ),
        pair(
            "b*b = a^{r1} prod_{m=1}^{r2} (1 - q^{-2m} a)",
            eq(&bsb, &bsb_rhs(false)),
            eq(&bsb, &bsb_rhs(true)),
        ),
    ];
    let verified = relations.iter().all(|r| r.inverted_q);
    TeardropReport {
        r1,
        r2,
        relations,
        verified,
    }
}

/// Normal form of a word given as letter counts, exposed for reports.
pub fn word_poly(parts: &[(Gen, u32)]) -> NCPoly {
    normal_form(&GenWord::new(words(parts)))
}
