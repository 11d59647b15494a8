use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{Arrow, BasisVector, TruncatedBasis};
use super::sparse::{compress, SparseOp, SparseVec};
use crate::error::LabelError;
use crate::ncalgebra::{Gen, NCPoly};
use crate::qarith::q_number_f64;

fn qn(x: f64, q: f64) -> f64 {
    q_number_f64((2.0 * x).round() as i64, q)
}

fn sq(x: f64, q: f64) -> f64 {
    let v = qn(x, q);
    debug_assert!(v > -1e-9, "negative q-number [{x}] under a square root");
    v.max(0.0).sqrt()
}

/// `(C_{j mu}, S_{j mu})` with `C^2 + S^2 = 1`.
pub fn coeff_cs(two_j: i64, two_mu: i64, q: f64) -> Result<(f64, f64), LabelError> {
    if two_j < 1 || two_mu.abs() > two_j || (two_j - two_mu) % 2 != 0 {
        return Err(LabelError::InvalidLabel {
            two_j,
            two_mu,
            two_n: 0,
        });
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(LabelError::Domain(q.to_string()));
    }
    let (j, mu) = (two_j as f64 / 2.0, two_mu as f64 / 2.0);
    let d = qn(2.0 * j, q).sqrt();
    let c = q.powf(-(j + mu) / 2.0) * sq(j - mu, q) / d;
    let s = q.powf((j - mu) / 2.0) * sq(j + mu, q) / d;
    Ok((c, s))
}

/// Entry `[tar][src]` of the 2x2 block of `Pi(a)` (or `Pi(b)` when `is_b`)
/// from source labels `(j, mu, n)` to level `j + sign/2`.
#[allow(clippy::too_many_arguments)]
fn block_entry(
    is_b: bool,
    sign: i32,
    tar: usize,
    src: usize,
    j: f64,
    mu: f64,
    n: f64,
    q: f64,
) -> f64 {
    let h = 0.5;
    let pre = q.powf((mu + n - h) / 2.0);
    match (is_b, sign > 0, tar, src) {
        (false, true, 0, 0) => {
            pre * sq(j + mu + 1.0, q) * q.powf(-j - h) * sq(j + n + 1.5, q) / qn(2.0 * j + 2.0, q)
        }
        (false, true, 1, 0) => {
            pre * sq(j + mu + 1.0, q) * q.powf(h) * sq(j - n + h, q)
                / (qn(2.0 * j + 1.0, q) * qn(2.0 * j + 2.0, q))
        }
        (false, true, 1, 1) => {
            pre * sq(j + mu + 1.0, q) * q.powf(-j) * sq(j + n + h, q) / qn(2.0 * j + 1.0, q)
        }
        (false, false, 0, 0) => {
            pre * sq(j - mu, q) * q.powf(j + 1.0) * sq(j - n + h, q) / qn(2.0 * j + 1.0, q)
        }
        (false, false, 0, 1) => {
            -pre * sq(j - mu, q) * q.powf(h) * sq(j + n + h, q)
                / (qn(2.0 * j, q) * qn(2.0 * j + 1.0, q))
        }
        (false, false, 1, 1) => {
            pre * sq(j - mu, q) * q.powf(j + h) * sq(j - n - h, q) / qn(2.0 * j, q)
        }
        (true, true, 0, 0) => pre * sq(j + mu + 1.0, q) * sq(j - n + 1.5, q) / qn(2.0 * j + 2.0, q),
        (true, true, 1, 0) => {
            -pre * sq(j + mu + 1.0, q) * q.powf(-j - 1.0) * sq(j + n + h, q)
                / (qn(2.0 * j + 1.0, q) * qn(2.0 * j + 2.0, q))
        }
        (true, true, 1, 1) => {
            pre * sq(j + mu + 1.0, q) * q.powf(-h) * sq(j - n + h, q) / qn(2.0 * j + 1.0, q)
        }
        (true, false, 0, 0) => {
            -pre * sq(j - mu, q) * q.powf(-h) * sq(j + n + h, q) / qn(2.0 * j + 1.0, q)
        }
        (true, false, 0, 1) => {
            -pre * sq(j - mu, q) * q.powf(j) * sq(j - n + h, q)
                / (qn(2.0 * j, q) * qn(2.0 * j + 1.0, q))
        }
        (true, false, 1, 1) => -pre * sq(j - mu, q) * sq(j + n - h, q) / qn(2.0 * j, q),
        _ => 0.0,
    }
}

/// Extra sign on a block entry, indexed by (generator, level shift, source level, source arrow, target arrow).
pub type PhaseFn = fn(Gen, i32, u32, Arrow, Arrow) -> f64;

fn unit_phase(_: Gen, _: i32, _: u32, _: Arrow, _: Arrow) -> f64 {
    1.0
}

fn check_q(q: f64) {
    assert!(q > 0.0 && q <= 1.0, "q = {q} outside (0, 1]");
}

fn raw_generator(is_b: bool, basis: &Arc<TruncatedBasis>, q: f64, phase: PhaseFn) -> SparseOp {
    check_q(q);
    let g = if is_b { Gen::B } else { Gen::A };
    let dn: i64 = if is_b { -1 } else { 1 };
    let cols = basis
        .vectors()
        .par_iter()
        .map(|v| {
            let (j, mu, n) = (
                v.two_j as f64 / 2.0,
                v.two_mu as f64 / 2.0,
                v.two_n as f64 / 2.0,
            );
            let mut col = Vec::with_capacity(4);
            for sign in [1i32, -1] {
                for tar in [Arrow::Up, Arrow::Down] {
                    let Some(row) = basis.find(
                        v.two_j as i64 + sign as i64,
                        tar,
                        v.two_mu as i64 + 1,
                        v.two_n as i64 + dn,
                    ) else {
                        continue;
                    };
                    let x = block_entry(is_b, sign, tar.index(), v.arrow.index(), j, mu, n, q)
                        * phase(g, sign, v.two_j, v.arrow, tar);
                    col.push((row, Complex64::new(x, 0.0)));
                }
            }
            compress(col)
        })
        .collect();
    SparseOp::from_columns(basis.clone(), cols)
}

/// The four generator operators on a truncated basis.
#[derive(Clone, Debug)]
pub struct Representation {
    pub q: f64,
    pub a: SparseOp,
    pub a_star: SparseOp,
    pub b: SparseOp,
    pub b_star: SparseOp,
}

impl Representation {
    pub fn new(basis: &Arc<TruncatedBasis>, q: f64) -> Self {
        Self::with_phases(basis, q, unit_phase)
    }

    /// Representation with explicit extra signs on the block entries.
    pub fn with_phases(basis: &Arc<TruncatedBasis>, q: f64, phase: PhaseFn) -> Self {
        let a = raw_generator(false, basis, q, phase);
        let b = raw_generator(true, basis, q, phase);
        let a_star = a.adjoint();
        let b_star = b.adjoint();
        Self {
            q,
            a,
            a_star,
            b,
            b_star,
        }
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        self.a.basis()
    }

    pub fn gen(&self, g: Gen) -> &SparseOp {
        match g {
            Gen::A => &self.a,
            Gen::AStar => &self.a_star,
            Gen::B => &self.b,
            Gen::BStar => &self.b_star,
        }
    }

    /// `Pi(x) e_c` for a single column.
    pub fn apply_poly(&self, x: &NCPoly, c: usize) -> SparseVec {
        let mut acc = Vec::new();
        for (mon, coeff) in x.terms() {
            let k = coeff.eval(self.q).expect("q is in (0, 1]").value();
            let mut v: SparseVec = vec![(c, Complex64::new(k, 0.0))];
            for g in mon.word().iter().rev() {
                v = self.gen(*g).apply(&v);
            }
            acc.extend(v);
        }
        compress(acc)
    }

    pub fn word_op(&self, x: &NCPoly) -> SparseOp {
        let n = self.basis().len();
        let cols = (0..n)
            .into_par_iter()
            .map(|c| self.apply_poly(x, c))
            .collect();
        SparseOp::from_columns(self.basis().clone(), cols)
    }
}

pub fn generator_op(g: Gen, basis: &Arc<TruncatedBasis>, q: f64) -> SparseOp {
    match g {
        Gen::A => raw_generator(false, basis, q, unit_phase),
        Gen::B => raw_generator(true, basis, q, unit_phase),
        Gen::AStar => raw_generator(false, basis, q, unit_phase).adjoint(),
        Gen::BStar => raw_generator(true, basis, q, unit_phase).adjoint(),
    }
}

pub fn word_op(x: &NCPoly, basis: &Arc<TruncatedBasis>, q: f64) -> SparseOp {
    Representation::new(basis, q).word_op(x)
}

/// Eigenvalue of the Dirac operator in doubled units: `4j+3` up, `-(4j+1)` down.
pub fn dirac_twice(v: &BasisVector) -> i64 {
    match v.arrow {
        Arrow::Up => 2 * v.two_j as i64 + 3,
        Arrow::Down => -(2 * v.two_j as i64 + 1),
    }
}

pub fn dirac(basis: &Arc<TruncatedBasis>) -> SparseOp {
    SparseOp::diagonal(basis.clone(), |v| {
        Complex64::new(dirac_twice(v) as f64 / 2.0, 0.0)
    })
}

pub fn lq_weight(basis: &Arc<TruncatedBasis>, q: f64) -> SparseOp {
    check_q(q);
    SparseOp::diagonal(basis.clone(), |v| {
        Complex64::new(q.powf(v.two_j as f64 / 2.0), 0.0)
    })
}

/// Diagonal `lambda'(k)` (entries `q^mu`) and `rho'(k)` (entries `q^n`).
pub fn k_gradings(basis: &Arc<TruncatedBasis>, q: f64) -> (SparseOp, SparseOp) {
    check_q(q);
    let lam = SparseOp::diagonal(basis.clone(), |v| {
        Complex64::new(q.powf(v.two_mu as f64 / 2.0), 0.0)
    });
    let rho = SparseOp::diagonal(basis.clone(), |v| {
        Complex64::new(q.powf(v.two_n as f64 / 2.0), 0.0)
    });
    (lam, rho)
}

/// Power of `i`, reduced mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase4(pub u8);

impl Phase4 {
    pub fn from_exponent(e: i64) -> Self {
        Phase4(e.rem_euclid(4) as u8)
    }

    pub fn value(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase4::from_exponent(-(self.0 as i64))
    }
}

impl std::ops::Mul for Phase4 {
    type Output = Phase4;

    // Exponents of i add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Phase4) -> Phase4 {
        Phase4::from_exponent(self.0 as i64 + o.0 as i64)
    }
}

/// Antilinear operator `v -> sum conj(v_x) phase_x e_{perm(x)}`.
#[derive(Clone, Debug)]
pub struct AntilinearOp {
    basis: Arc<TruncatedBasis>,
    perm: Vec<usize>,
    phase: Vec<Phase4>,
}

impl AntilinearOp {
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[Phase4] {
        &self.phase
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        compress(
            v.iter()
                .map(|(i, x)| (self.perm[*i], x.conj() * self.phase[*i].value()))
                .collect(),
        )
    }

    /// Phase of `J^2` on each basis vector.
    pub fn square_phases(&self) -> Vec<Phase4> {
        (0..self.perm.len())
            .map(|x| self.phase[x].conj() * self.phase[self.perm[x]])
            .collect()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        for &p in &self.perm {
            if p >= seen.len() || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    /// `J T J^{-1}` as a linear operator.
    pub fn conjugate(&self, t: &SparseOp) -> SparseOp {
        let n = self.perm.len();
        let mut cols: Vec<SparseVec> = vec![Vec::new(); n];
        for x in 0..n {
            let px = self.phase[x].conj().value();
            let col: SparseVec = t
                .column(x)
                .iter()
                .map(|(r, v)| (self.perm[*r], px * v.conj() * self.phase[*r].value()))
                .collect();
            cols[self.perm[x]] = compress(col);
        }
        SparseOp::from_columns(self.basis.clone(), cols)
    }
}

/// Exponent of `i` in the real structure's phase.
pub fn reality_exponent(v: &BasisVector) -> i64 {
    let (tj, tm, tn) = (v.two_j as i64, v.two_mu as i64, v.two_n as i64);
    match v.arrow {
        Arrow::Up => 2 * tj + tm + tn,
        Arrow::Down => 2 * tj - tm - tn,
    }
}

pub fn reality(basis: &Arc<TruncatedBasis>) -> AntilinearOp {
    let mut perm = Vec::with_capacity(basis.len());
    let mut phase = Vec::with_capacity(basis.len());
    for v in basis.vectors() {
        let mirror = BasisVector {
            two_mu: -v.two_mu,
            two_n: -v.two_n,
            ..*v
        };
        perm.push(basis.index_of(&mirror).expect("mirror label is legal"));
        phase.push(Phase4::from_exponent(reality_exponent(v)));
    }
    AntilinearOp {
        basis: basis.clone(),
        perm,
        phase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::basis::enumerate_basis;

    #[test]
    fn cs_boundaries_and_norm() {
        let (c, s) = coeff_cs(4, 4, 0.5).unwrap();
        assert_eq!(c, 0.0);
        assert!((s - 1.0).abs() < 1e-12);
        let (c, s) = coeff_cs(4, -4, 0.5).unwrap();
        assert!((c - 1.0).abs() < 1e-12 && s == 0.0);
        let (c, s) = coeff_cs(2, 0, 0.5).unwrap();
        assert!((c * c + s * s - 1.0).abs() < 1e-12);
        assert!(coeff_cs(2, 1, 0.5).is_err());
    }

    #[test]
    fn pi_a_on_ground_state() {
        let b = Arc::new(enumerate_basis(3));
        let a = generator_op(Gen::A, &b, 0.5);
        let src = b.find(0, Arrow::Up, 0, 1).unwrap();
        let col = a.column(src);
        assert_eq!(col.len(), 1);
        let tgt = b.find(1, Arrow::Up, 1, 2).unwrap();
        assert_eq!(col[0].0, tgt);
        let want = 0.5f64.powf(-0.5) / 2.5f64.sqrt();
        assert!((col[0].1.re - want).abs() < 1e-14);
    }

    #[test]
    fn charges_preserved() {
        let b = Arc::new(enumerate_basis(6));
        let a = generator_op(Gen::A, &b, 0.5);
        let bb = generator_op(Gen::B, &b, 0.5);
        for c in 0..b.len() {
            let s = b.get(c);
            for (r, _) in bb.column(c) {
                let t = b.get(*r);
                assert_eq!(t.two_mu + t.two_n, s.two_mu + s.two_n);
            }
            for (r, _) in a.column(c) {
                let t = b.get(*r);
                assert_eq!(t.two_mu - t.two_n, s.two_mu - s.two_n);
            }
        }
        assert!(a.max_column_nnz() <= 8 && bb.max_column_nnz() <= 8);
    }

    #[test]
    fn dirac_examples() {
        let b = Arc::new(enumerate_basis(3));
        let d = dirac(&b);
        let i = b.find(0, Arrow::Up, 0, 1).unwrap();
        assert_eq!(d.entry(i, i).re, 1.5);
        let k = b.find(1, Arrow::Down, 1, 0).unwrap();
        assert_eq!(d.entry(k, k).re, -1.5);
        let mult = (0..b.len()).filter(|&x| d.entry(x, x).re == 1.5).count();
        assert_eq!(mult, 2);
    }

    #[test]
    fn reality_examples() {
        let b = Arc::new(enumerate_basis(5));
        let j = reality(&b);
        let src = b.find(0, Arrow::Up, 0, 1).unwrap();
        let img = j.apply(&vec![(src, Complex64::new(1.0, 0.0))]);
        assert_eq!(
            img,
            vec![(
                b.find(0, Arrow::Up, 0, -1).unwrap(),
                Complex64::new(0.0, 1.0)
            )]
        );
        assert!(j.square_phases().iter().all(|p| *p == Phase4(2)));
        assert!(j.is_bijection());
    }

    #[test]
    fn lq_and_gradings() {
        let b = Arc::new(enumerate_basis(4));
        let l = lq_weight(&b, 0.5);
        let i = b.find(2, Arrow::Up, 0, 1).unwrap();
        assert_eq!(l.entry(i, i).re, 0.5);
        let z = b.find(0, Arrow::Up, 0, 1).unwrap();
        assert_eq!(l.entry(z, z).re, 1.0);
        let (lam, _) = k_gradings(&b, 0.5);
        assert_eq!(lam.entry(i, i).re, 1.0);
    }
}
