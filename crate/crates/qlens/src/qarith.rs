//! Exact Laurent polynomials in the deformation parameter `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::QArithError;

/// Laurent polynomial `sum c_e q^e` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigRational>,
}

/// A finite real obtained by evaluating a [`QLaurent`].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct QReal(f64);

impl QReal {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c q^e`.
    pub fn monomial(e: i64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(e, BigRational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The substitution `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Horner evaluation at a real `q` in `[0, 1]`.
    pub fn eval(&self, q: f64) -> Result<QReal, QArithError> {
        if !(0.0..=1.0).contains(&q) || q.is_nan() {
            return Err(QArithError::Domain(q));
        }
        let Some(lo) = self.min_exp() else {
            return Ok(QReal(0.0));
        };
        if q == 0.0 {
            if lo < 0 {
                return Err(QArithError::NegativePowerAtZero(lo));
            }
            return Ok(QReal(self.coeff(0).to_f64().unwrap_or(f64::NAN)));
        }
        let hi = self.max_exp().unwrap_or(lo);
        let mut acc = 0.0;
        for e in (lo..=hi).rev() {
            acc = acc * q
                + self
                    .terms
                    .get(&e)
                    .map_or(0.0, |c| c.to_f64().unwrap_or(f64::NAN));
        }
        Ok(QReal(acc * q.powi(lo as i32)))
    }

    /// Exact evaluation at a rational `q`; `q = 0` requires no negative powers.
    pub fn eval_exact(&self, q: &BigRational) -> Result<BigRational, QArithError> {
        let Some(lo) = self.min_exp() else {
            return Ok(BigRational::zero());
        };
        if q.is_zero() {
            if lo < 0 {
                return Err(QArithError::NegativePowerAtZero(lo));
            }
            return Ok(self.coeff(0));
        }
        let hi = self.max_exp().unwrap_or(lo);
        let mut acc = BigRational::zero();
        for e in (lo..=hi).rev() {
            acc = acc * q + self.coeff(e);
        }
        Ok(acc * rational_pow(q, lo))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &QLaurent) -> Option<QLaurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_lo = d.min_exp()?;
        let d_hi = d.max_exp()?;
        let lead = d.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_hi) = rem.max_exp() {
            let r_lo = rem.min_exp().unwrap_or(r_hi);
            if r_hi - r_lo < d_hi - d_lo {
                return None;
            }
            let c = rem.coeff(r_hi) / &lead;
            let e = r_hi - d_hi;
            let t = Self::monomial(e, c);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

fn rational_pow(q: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// The q-number `[n] = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn q_number(n: i64) -> QLaurent {
    let sign = if n < 0 {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    let a = n.abs();
    QLaurent::from_terms((0..a).map(|i| (a - 1 - 2 * i, sign.clone())))
}

/// Floating q-number for half-integer arguments given as `twice`.
pub fn q_number_f64(twice: i64, q: f64) -> f64 {
    if q == 1.0 {
        return twice as f64 / 2.0;
    }
    let x = twice as f64 / 2.0;
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(mut self, rhs: QLaurent) -> QLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(mut self, rhs: QLaurent) -> QLaurent {
        self -= &rhs;
        self
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -self.clone()
    }
}

impl From<i64> for QLaurent {
    fn from(c: i64) -> Self {
        QLaurent::int(c)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let unit = abs.is_one();
            if !unit || *e == 0 {
                write!(f, "{abs}")?;
            }
            match *e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

fn rational_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            terms: Vec<(i64, String)>,
        }
        Repr {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, rational_to_string(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            terms: Vec<(i64, String)>,
        }
        let repr = Repr::deserialize(d)?;
        let mut out = QLaurent::zero();
        for (e, c) in repr.terms {
            let c = parse_rational(&c)
                .ok_or_else(|| D::Error::custom(format!("bad rational {c:?}")))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

/// Exact ratio of two Laurent polynomials, used for Haar state values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QRatio {
    pub num: QLaurent,
    pub den: QLaurent,
}

impl QRatio {
    pub fn new(num: QLaurent, den: QLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self::new(QLaurent::zero(), QLaurent::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &QRatio) -> QRatio {
        if self.den == other.den {
            return QRatio::new(&self.num + &other.num, self.den.clone());
        }
        QRatio::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn eval(&self, q: f64) -> Result<f64, QArithError> {
        Ok(self.num.eval(q)?.value() / self.den.eval(q)?.value())
    }

    /// Cross-multiplied exact equality.
    pub fn equals(&self, other: &QRatio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn q_number_small_cases() {
        assert!(q_number(0).is_zero());
        assert!(q_number(1).is_one());
        assert_eq!(q_number(2).eval(0.5).unwrap().value(), 2.5);
        assert_eq!(q_number(-3), -q_number(3));
    }

    #[test]
    fn eval_examples() {
        let p = QLaurent::q_pow(2) + QLaurent::q_pow(4);
        assert_eq!(p.eval(0.5).unwrap().value(), 0.3125);
        assert_eq!(QLaurent::one().eval(0.0).unwrap().value(), 1.0);
        assert!(matches!(
            QLaurent::q_pow(-1).eval(0.0),
            Err(QArithError::NegativePowerAtZero(-1))
        ));
        assert!(matches!(
            QLaurent::one().eval(1.5),
            Err(QArithError::Domain(_))
        ));
        assert_eq!(q_number(7).eval(1.0).unwrap().value(), 7.0);
    }

    #[test]
    fn ring_examples() {
        assert!((QLaurent::q_pow(1) * QLaurent::q_pow(-1)).is_one());
        let sq = &q_number(2) * &q_number(2);
        assert_eq!(sq, &q_number(3) + &q_number(1));
        assert_eq!(
            sq,
            QLaurent::from_terms([(2, r(1, 1)), (0, r(2, 1)), (-2, r(1, 1))])
        );
        assert!((&q_number(5) - &q_number(5)).is_zero());
    }

    #[test]
    fn div_exact_round_trip() {
        let a = &q_number(3) * &(QLaurent::q_pow(-2) + QLaurent::int(3));
        assert_eq!(
            a.div_exact(&q_number(3)).unwrap(),
            QLaurent::q_pow(-2) + QLaurent::int(3)
        );
        assert!(q_number(3).div_exact(&q_number(2)).is_none());
    }

    #[test]
    fn exact_eval_matches_float() {
        let p = q_number(4).shift(-3);
        let exact = p.eval_exact(&r(1, 2)).unwrap();
        assert_eq!(exact.to_f64().unwrap(), p.eval(0.5).unwrap().value());
    }

    #[test]
    fn json_shape() {
        let p = QLaurent::from_terms([(-1, r(1, 2)), (3, r(-2, 1))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"terms":[[-1,"1/2"],[3,"-2/1"]]}"#);
        let back: QLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display() {
        let p = QLaurent::from_terms([(2, r(1, 1)), (0, r(2, 1)), (-2, r(-1, 3))]);
        assert_eq!(p.to_string(), "q^2 + 2 - 1/3q^-2");
    }
}
