//! Normal-ordered arithmetic in the coordinate algebra of SU_q(2).
//!
//! Elements are linear combinations of `e_{klm} = a^k b^l b*^m` (k >= 0) and
//! `e_{klm} = b^l b*^m a*^{-k}` (k < 0) with [`QLaurent`] coefficients.

pub mod q0;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AlgebraError, QArithError};
use crate::qarith::{QLaurent, QRatio};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "a*")]
    AStar,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b*")]
    BStar,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::AStar, Gen::B, Gen::BStar];

    pub fn star(self) -> Gen {
        match self {
            Gen::A => Gen::AStar,
            Gen::AStar => Gen::A,
            Gen::B => Gen::BStar,
            Gen::BStar => Gen::B,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::A => "a",
            Gen::AStar => "a*",
            Gen::B => "b",
            Gen::BStar => "b*",
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gen {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "a" => Ok(Gen::A),
            "a*" => Ok(Gen::AStar),
            "b" => Ok(Gen::B),
            "b*" => Ok(Gen::BStar),
            other => Err(AlgebraError::BadLetter(other.to_string())),
        }
    }
}

/// Basis element `e_{klm}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub k: i64,
    pub l: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { k: 0, l: 0, m: 0 };

    pub fn new(k: i64, l: u32, m: u32) -> Self {
        Self { k, l, m }
    }

    /// The normal-ordered word this basis element stands for.
    pub fn word(&self) -> Vec<Gen> {
        let mut w = Vec::with_capacity(self.len());
        if self.k > 0 {
            w.extend(std::iter::repeat_n(Gen::A, self.k as usize));
        }
        w.extend(std::iter::repeat_n(Gen::B, self.l as usize));
        w.extend(std::iter::repeat_n(Gen::BStar, self.m as usize));
        if self.k < 0 {
            w.extend(std::iter::repeat_n(Gen::AStar, (-self.k) as usize));
        }
        w
    }

    pub fn len(&self) -> usize {
        self.k.unsigned_abs() as usize + self.l as usize + self.m as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Net charge `l - m` in `b`.
    pub fn b_charge(&self) -> i64 {
        self.l as i64 - self.m as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({},{},{})", self.k, self.l, self.m)
    }
}

/// An unordered input word with a leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenWord {
    pub coeff: QLaurent,
    pub letters: Vec<Gen>,
}

impl GenWord {
    pub fn new(letters: Vec<Gen>) -> Self {
        Self {
            coeff: QLaurent::one(),
            letters,
        }
    }

    pub fn with_coeff(coeff: QLaurent, letters: Vec<Gen>) -> Self {
        Self { coeff, letters }
    }
}

/// Parses words like `"a b* a*"` or `"ab*a*"`.
impl FromStr for GenWord {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        let mut chars = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '.')
            .peekable();
        while let Some(c) = chars.next() {
            let starred = chars.next_if_eq(&'*').is_some();
            let g = match (c, starred) {
                ('a', false) => Gen::A,
                ('a', true) => Gen::AStar,
                ('b', false) => Gen::B,
                ('b', true) => Gen::BStar,
                _ => return Err(AlgebraError::BadLetter(c.to_string())),
            };
            letters.push(g);
        }
        Ok(GenWord::new(letters))
    }
}

/// Order in which a word is folded into normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Multiply letters onto the right of the running product.
    LeftToRight,
    /// Multiply letters onto the left of the running product.
    RightToLeft,
}

/// Element of the coordinate algebra in the `e_{klm}` basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, QLaurent>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, QLaurent::one())
    }

    pub fn constant(c: QLaurent) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(mon: Monomial, c: QLaurent) -> Self {
        let mut out = Self::zero();
        out.add_term(mon, c);
        out
    }

    pub fn basis(k: i64, l: u32, m: u32) -> Self {
        Self::monomial(Monomial::new(k, l, m), QLaurent::one())
    }

    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::A => Self::basis(1, 0, 0),
            Gen::AStar => Self::basis(-1, 0, 0),
            Gen::B => Self::basis(0, 1, 0),
            Gen::BStar => Self::basis(0, 0, 1),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, QLaurent)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (mon, c) in iter {
            out.add_term(mon, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(QLaurent::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QLaurent)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, mon: &Monomial) -> QLaurent {
        self.terms.get(mon).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mon: Monomial, c: QLaurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mon).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&mon);
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (mon, c) in &other.terms {
            out.add_term(*mon, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (mon, c) in &other.terms {
            out.add_term(*mon, -c);
        }
        out
    }

    pub fn scale(&self, c: &QLaurent) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Right multiplication by a single generator.
    pub fn mul_gen_right(&self, g: Gen) -> NCPoly {
        let mut out = NCPoly::zero();
        for (mon, c) in &self.terms {
            for (m2, f) in right_gen(mon, g) {
                out.add_term(m2, c * &f);
            }
        }
        out
    }

    /// Left multiplication by a single generator.
    pub fn mul_gen_left(&self, g: Gen) -> NCPoly {
        let mut out = NCPoly::zero();
        for (mon, c) in &self.terms {
            for (m2, f) in left_gen(g, mon) {
                out.add_term(m2, c * &f);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..n {
            acc = multiply(&acc, self);
        }
        acc
    }

    /// Largest word length among the monomials.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    /// Smallest power of `q` appearing in any coefficient.
    pub fn min_q_exponent(&self) -> Option<i64> {
        self.terms.values().filter_map(QLaurent::min_exp).min()
    }
}

fn q(e: i64) -> QLaurent {
    QLaurent::q_pow(e)
}

fn neg_q(e: i64) -> QLaurent {
    QLaurent::monomial(e, -BigRational::one())
}

/// `e_{klm} * g` expanded in the basis.
fn right_gen(mon: &Monomial, g: Gen) -> Vec<(Monomial, QLaurent)> {
    let Monomial { k, l, m } = *mon;
    let lm = (l + m) as i64;
    let s = -k;
    match g {
        Gen::A if k >= 0 => vec![(Monomial::new(k + 1, l, m), q(lm))],
        Gen::A => vec![
            (Monomial::new(k + 1, l, m), q(0)),
            (Monomial::new(k + 1, l + 1, m + 1), neg_q(2 * s)),
        ],
        Gen::AStar if k <= 0 => vec![(Monomial::new(k - 1, l, m), q(0))],
        Gen::AStar => vec![
            (Monomial::new(k - 1, l, m), q(-lm)),
            (Monomial::new(k - 1, l + 1, m + 1), neg_q(-lm)),
        ],
        Gen::B if k >= 0 => vec![(Monomial::new(k, l + 1, m), q(0))],
        Gen::B => vec![(Monomial::new(k, l + 1, m), q(s))],
        Gen::BStar if k >= 0 => vec![(Monomial::new(k, l, m + 1), q(0))],
        Gen::BStar => vec![(Monomial::new(k, l, m + 1), q(s))],
    }
}

/// `g * e_{klm}` expanded in the basis.
fn left_gen(g: Gen, mon: &Monomial) -> Vec<(Monomial, QLaurent)> {
    let Monomial { k, l, m } = *mon;
    let lm = (l + m) as i64;
    match g {
        Gen::A if k >= 0 => vec![(Monomial::new(k + 1, l, m), q(0))],
        Gen::A => vec![
            (Monomial::new(k + 1, l, m), q(-lm)),
            (Monomial::new(k + 1, l + 1, m + 1), neg_q(-lm)),
        ],
        Gen::AStar if k <= 0 => vec![(Monomial::new(k - 1, l, m), q(lm))],
        Gen::AStar => vec![
            (Monomial::new(k - 1, l, m), q(0)),
            (Monomial::new(k - 1, l + 1, m + 1), neg_q(2 * k)),
        ],
        Gen::B if k >= 0 => vec![(Monomial::new(k, l + 1, m), q(k))],
        Gen::B => vec![(Monomial::new(k, l + 1, m), q(0))],
        Gen::BStar if k >= 0 => vec![(Monomial::new(k, l, m + 1), q(k))],
        Gen::BStar => vec![(Monomial::new(k, l, m + 1), q(0))],
    }
}

/// Normal form of a word, folding letters onto the right.
pub fn normal_form(w: &GenWord) -> NCPoly {
    normal_form_with(w, Strategy::LeftToRight)
}

pub fn normal_form_with(w: &GenWord, strategy: Strategy) -> NCPoly {
    let mut acc = NCPoly::constant(w.coeff.clone());
    match strategy {
        Strategy::LeftToRight => {
            for g in &w.letters {
                acc = acc.mul_gen_right(*g);
            }
        }
        Strategy::RightToLeft => {
            for g in w.letters.iter().rev() {
                acc = acc.mul_gen_left(*g);
            }
        }
    }
    acc
}

/// Normal form of a plain word with unit coefficient.
pub fn word(letters: &[Gen]) -> NCPoly {
    normal_form(&GenWord::new(letters.to_vec()))
}

pub fn multiply(x: &NCPoly, y: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (mon, c) in &y.terms {
        let mut part = x.clone();
        for g in mon.word() {
            part = part.mul_gen_right(g);
        }
        for (m2, v) in part.terms {
            out.add_term(m2, &v * c);
        }
    }
    out
}

/// Product of several factors, left to right.
pub fn product<'a, I: IntoIterator<Item = &'a NCPoly>>(factors: I) -> NCPoly {
    factors
        .into_iter()
        .fold(NCPoly::one(), |acc, f| multiply(&acc, f))
}

/// The involution; coefficients are real so only words are reversed.
pub fn star(x: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (mon, c) in &x.terms {
        let letters: Vec<Gen> = mon.word().into_iter().rev().map(Gen::star).collect();
        let nf = normal_form(&GenWord::with_coeff(c.clone(), letters));
        for (m2, v) in nf.terms {
            out.add_term(m2, v);
        }
    }
    out
}

/// Haar state; `psi(e_{0mm}) = 1 / (1 + q^2 + ... + q^{2m})`, zero elsewhere.
pub fn haar_state(x: &NCPoly) -> QRatio {
    let mut by_m: BTreeMap<u32, QLaurent> = BTreeMap::new();
    for (mon, c) in &x.terms {
        if mon.k == 0 && mon.l == mon.m {
            *by_m.entry(mon.m).or_default() += c;
        }
    }
    let mut acc = QRatio::zero();
    for (m, c) in by_m {
        if c.is_zero() {
            continue;
        }
        let den = QLaurent::from_terms((0..=m as i64).map(|i| (2 * i, BigRational::one())));
        acc = acc.add(&QRatio::new(c, den));
    }
    acc
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub(crate) fn check_coprime(p: u32, r: i64) -> Result<(), AlgebraError> {
    if p == 0 || gcd(p as i64, r) != 1 {
        return Err(AlgebraError::NotCoprime { p, r });
    }
    Ok(())
}

/// U(1) degree `n` with `k + r(l - m) = n p`.
pub fn u1_degree(mon: &Monomial, p: u32, r: i64) -> Result<i64, AlgebraError> {
    check_coprime(p, r)?;
    let t = mon.k + r * mon.b_charge();
    if t.rem_euclid(p as i64) != 0 {
        return Err(AlgebraError::NotHomogeneous {
            k: mon.k,
            l: mon.l,
            m: mon.m,
            p,
            r,
        });
    }
    Ok(t / p as i64)
}

/// Membership of a basis element in the lens subalgebra `L_q(p, r)`.
pub fn lens_member(mon: &Monomial, p: u32, r: i64) -> bool {
    (mon.k + r * mon.b_charge()).rem_euclid(p as i64) == 0
}

/// Common U(1) degree of all monomials, if there is one.
pub fn homogeneous_degree(x: &NCPoly, p: u32, r: i64) -> Result<Option<i64>, AlgebraError> {
    let mut deg = None;
    for mon in x.monomials() {
        let d = u1_degree(mon, p, r)?;
        match deg {
            None => deg = Some(d),
            Some(d0) if d0 != d => return Ok(None),
            _ => {}
        }
    }
    Ok(deg)
}

/// Coefficientwise evaluation of an element at a real `q`.
pub type NumericPoly = BTreeMap<Monomial, f64>;

pub fn specialize(x: &NCPoly, q: f64) -> Result<NumericPoly, QArithError> {
    let mut out = BTreeMap::new();
    for (mon, c) in &x.terms {
        let v = c.eval(q)?.value();
        if v != 0.0 {
            out.insert(*mon, v);
        }
    }
    Ok(out)
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mon, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){mon}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    k: i64,
    l: u32,
    m: u32,
    coeff: QLaurent,
}

impl Serialize for NCPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            terms: Vec<TermRepr>,
        }
        Repr {
            terms: self
                .terms
                .iter()
                .map(|(mon, c)| TermRepr {
                    k: mon.k,
                    l: mon.l,
                    m: mon.m,
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            terms: Vec<TermRepr>,
        }
        let repr = Repr::deserialize(d)?;
        let mut out = NCPoly::zero();
        for t in repr.terms {
            if t.coeff.is_zero() {
                return Err(D::Error::custom("zero coefficient"));
            }
            out.add_term(Monomial::new(t.k, t.l, t.m), t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Gen::*;

    fn poly(terms: &[((i64, u32, u32), QLaurent)]) -> NCPoly {
        NCPoly::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), c.clone())),
        )
    }

    #[test]
    fn defining_relations() {
        assert_eq!(word(&[B, A]), poly(&[((1, 1, 0), q(1))]));
        assert_eq!(
            word(&[A, AStar]),
            poly(&[((0, 0, 0), q(0)), ((0, 1, 1), neg_q(0))])
        );
        assert_eq!(
            word(&[AStar, A]),
            poly(&[((0, 0, 0), q(0)), ((0, 1, 1), neg_q(2))])
        );
        assert_eq!(word(&[BStar, A]), poly(&[((1, 0, 1), q(1))]));
        assert_eq!(word(&[B, BStar]), word(&[BStar, B]));
        assert_eq!(word(&[AStar, B]), word(&[B, AStar]).scale(&q(1)));
        assert_eq!(word(&[AStar, BStar]), word(&[BStar, AStar]).scale(&q(1)));
    }

    #[test]
    fn multiply_examples() {
        let x = poly(&[((2, 1, 0), q(3)), ((-1, 0, 2), neg_q(-1))]);
        assert_eq!(multiply(&NCPoly::one(), &x), x);
        assert_eq!(
            multiply(&NCPoly::basis(1, 0, 0), &NCPoly::basis(-1, 0, 0)),
            NCPoly::one().sub(&NCPoly::basis(0, 1, 1))
        );
        assert_eq!(
            multiply(&NCPoly::basis(0, 1, 0), &NCPoly::basis(0, 0, 1)),
            NCPoly::basis(0, 1, 1)
        );
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&NCPoly::gen(A)), NCPoly::gen(AStar));
        assert_eq!(star(&NCPoly::one()), NCPoly::one());
        let qab = NCPoly::basis(1, 1, 0).scale(&q(1));
        assert_eq!(star(&qab), poly(&[((-1, 0, 1), q(1))]));
    }

    #[test]
    fn strategies_agree_on_mixed_word() {
        let w: GenWord = "a b* a* a b a* b*".parse().unwrap();
        assert_eq!(
            normal_form_with(&w, Strategy::LeftToRight),
            normal_form_with(&w, Strategy::RightToLeft)
        );
    }

    #[test]
    fn haar_examples() {
        assert!(haar_state(&NCPoly::one()).equals(&QRatio::new(QLaurent::one(), QLaurent::one())));
        assert!(haar_state(&NCPoly::gen(A)).is_zero());
        let want = QRatio::new(QLaurent::one() - q(2), QLaurent::one() - q(4));
        assert!(haar_state(&NCPoly::basis(0, 1, 1)).equals(&want));
    }

    #[test]
    fn degrees_and_membership() {
        for r in [1, 2, -1, 5] {
            assert_eq!(u1_degree(&Monomial::new(3, 0, 0), 3, r), Ok(1));
        }
        assert_eq!(u1_degree(&Monomial::new(1, 1, 0), 3, 2), Ok(1));
        assert!(matches!(
            u1_degree(&Monomial::new(1, 0, 0), 3, 2),
            Err(AlgebraError::NotHomogeneous { .. })
        ));
        assert!(lens_member(&Monomial::ONE, 7, 3));
        assert!(lens_member(&Monomial::new(1, 1, 0), 2, 1));
        assert!(!lens_member(&Monomial::new(1, 0, 0), 2, 1));
    }

    #[test]
    fn specialize_examples() {
        assert!(specialize(&word(&[B, A]), 0.0).unwrap().is_empty());
        let s = specialize(&word(&[AStar, A]), 0.0).unwrap();
        assert_eq!(s, BTreeMap::from([(Monomial::ONE, 1.0)]));
        assert_eq!(
            specialize(&NCPoly::one(), 0.5).unwrap(),
            BTreeMap::from([(Monomial::ONE, 1.0)])
        );
        let neg = word(&[A, B, AStar]);
        assert_eq!(neg.min_q_exponent(), Some(-1));
        assert!(matches!(
            specialize(&neg, 0.0),
            Err(QArithError::NegativePowerAtZero(-1))
        ));
    }

    #[test]
    fn parse_words() {
        let w: GenWord = "ab*a*".parse().unwrap();
        assert_eq!(w.letters, vec![A, BStar, AStar]);
        assert!("ac".parse::<GenWord>().is_err());
    }

    #[test]
    fn json_shape() {
        let x = poly(&[((0, 1, 1), neg_q(0)), ((-1, 0, 0), q(2))]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[{"k":-1,"l":0,"m":0,"coeff":{"terms":[[2,"1/1"]]}},{"k":0,"l":1,"m":1,"coeff":{"terms":[[0,"-1/1"]]}}]}"#
        );
        assert_eq!(serde_json::from_str::<NCPoly>(&s).unwrap(), x);
    }
}
