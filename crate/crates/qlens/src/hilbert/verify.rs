use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::TruncatedBasis;
use super::rep::{dirac_twice, reality, AntilinearOp, Phase4, Representation};
use super::sparse::{compress, max_abs, norm2, sub_vec, SparseOp, SparseVec};
use crate::ncalgebra::{star, Gen, NCPoly};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationReport {
    pub q: f64,
    pub two_jmax: u32,
    pub margin: u32,
    pub interior_columns: usize,
    pub relations: Vec<Residual>,
    /// `Pi(1) - 1`, zero by construction.
    pub unit_residual: f64,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.relations
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

fn interior(basis: &TruncatedBasis, margin: u32) -> Vec<usize> {
    basis
        .up_to(basis.two_jmax() as i64 - margin as i64)
        .collect()
}

fn scaled(v: SparseVec, s: f64) -> SparseVec {
    v.into_iter().map(|(i, x)| (i, x * s)).collect()
}

fn chain(rep: &Representation, letters: &[Gen], c: usize) -> SparseVec {
    let mut v: SparseVec = vec![(c, Complex64::new(1.0, 0.0))];
    for g in letters.iter().rev() {
        v = rep.gen(*g).apply(&v);
    }
    v
}

/// Residuals of the five defining relations on interior columns.
pub fn verify_relations(rep: &Representation, margin: u32) -> RelationReport {
    assert!(margin >= 2, "margin must be at least 2");
    use Gen::*;
    let basis = rep.basis();
    let q = rep.q;
    let cols = interior(basis, margin);
    let one = |c: usize| -> SparseVec { vec![(c, Complex64::new(1.0, 0.0))] };
    type Rel<'a> = (&'static str, Box<dyn Fn(usize) -> SparseVec + Sync + 'a>);
    let rels: Vec<Rel> = vec![
        (
            "ba - q ab",
            Box::new(|c| sub_vec(&chain(rep, &[B, A], c), &scaled(chain(rep, &[A, B], c), q))),
        ),
        (
            "b*a - q ab*",
            Box::new(|c| {
                sub_vec(
                    &chain(rep, &[BStar, A], c),
                    &scaled(chain(rep, &[A, BStar], c), q),
                )
            }),
        ),
        (
            "bb* - b*b",
            Box::new(|c| sub_vec(&chain(rep, &[B, BStar], c), &chain(rep, &[BStar, B], c))),
        ),
        (
            "a*a + q^2 b*b - 1",
            Box::new(|c| {
                let mut v = chain(rep, &[AStar, A], c);
                v.extend(scaled(chain(rep, &[BStar, B], c), q * q));
                sub_vec(&compress(v), &one(c))
            }),
        ),
        (
            "aa* + bb* - 1",
            Box::new(|c| {
                let mut v = chain(rep, &[A, AStar], c);
                v.extend(chain(rep, &[B, BStar], c));
                sub_vec(&compress(v), &one(c))
            }),
        ),
    ];
    let relations = rels
        .iter()
        .map(|(name, f)| Residual {
            name: name.to_string(),
            residual: cols
                .par_iter()
                .map(|&c| max_abs(&f(c)))
                .reduce(|| 0.0, f64::max),
        })
        .collect();
    let unit = rep
        .word_op(&NCPoly::one())
        .sub(&SparseOp::identity(basis.clone()));
    RelationReport {
        q,
        two_jmax: basis.two_jmax(),
        margin,
        interior_columns: cols.len(),
        relations,
        unit_residual: unit.max_abs_on(0..basis.len()),
    }
}

/// `max |Pi(x*) - Pi(x)^dagger|` over interior columns.
pub fn adjointness_residual(rep: &Representation, x: &NCPoly, margin: u32) -> f64 {
    let lhs = rep.word_op(&star(x));
    let rhs = rep.word_op(x).adjoint();
    let cols = interior(rep.basis(), margin);
    lhs.sub(&rhs).max_abs_on(cols)
}

/// Residuals of `lambda'(k) Pi(g) lambda'(k)^{-1} = q^{s} Pi(g)` and the `rho'(k)` analogues.
pub fn grading_residuals(rep: &Representation, margin: u32) -> Vec<Residual> {
    let basis = rep.basis();
    let q = rep.q;
    let cols = interior(basis, margin);
    let check = |op: &SparseOp, weight: &dyn Fn(usize) -> f64, scale: f64| -> f64 {
        cols.iter()
            .map(|&c| {
                op.column(c)
                    .iter()
                    .map(|(r, x)| (x * (weight(*r) / weight(c)) - x * scale).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };
    let lam = |i: usize| q.powf(basis.get(i).two_mu as f64 / 2.0);
    let rho = |i: usize| q.powf(basis.get(i).two_n as f64 / 2.0);
    let sq = q.sqrt();
    vec![
        Residual {
            name: "lambda(k) a".into(),
            residual: check(&rep.a, &lam, sq),
        },
        Residual {
            name: "lambda(k) b".into(),
            residual: check(&rep.b, &lam, sq),
        },
        Residual {
            name: "rho(k) a".into(),
            residual: check(&rep.a, &rho, sq),
        },
        Residual {
            name: "rho(k) b".into(),
            residual: check(&rep.b, &rho, 1.0 / sq),
        },
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealStructureReport {
    pub j_squared_minus_one: bool,
    pub dj_equals_jd: bool,
    pub antiunitary: bool,
    /// Largest deviation of `<Jx, Jy> - conj(<x, y>)` on sampled vectors.
    pub inner_product_residual: f64,
}

impl RealStructureReport {
    pub fn passed(&self) -> bool {
        self.j_squared_minus_one
            && self.dj_equals_jd
            && self.antiunitary
            && self.inner_product_residual == 0.0
    }
}

fn inner(x: &SparseVec, y: &SparseVec) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (i, a) in x {
        if let Ok(pos) = y.binary_search_by_key(i, |e| e.0) {
            s += a.conj() * y[pos].1;
        }
    }
    s
}

/// Exact checks on `J` plus the inner-product identity on basis pairs `(e_x, i e_x + e_y)`.
pub fn check_real_structure(basis: &Arc<TruncatedBasis>) -> RealStructureReport {
    let j = reality(basis);
    let j_sq = j.square_phases().iter().all(|p| *p == Phase4(2));
    let dj = (0..basis.len())
        .all(|x| dirac_twice(&basis.get(x)) == dirac_twice(&basis.get(j.perm()[x])));
    let bij = j.is_bijection();
    let mut worst: f64 = 0.0;
    let n = basis.len();
    for x in (0..n).step_by(7) {
        let y = (x * 31 + 5) % n;
        let u: SparseVec = vec![(x, Complex64::new(0.5, -2.0))];
        let v: SparseVec = compress(vec![
            (x, Complex64::new(0.0, 1.0)),
            (y, Complex64::new(1.0, 0.0)),
        ]);
        let lhs = inner(&j.apply(&u), &j.apply(&v));
        let rhs = inner(&u, &v).conj();
        worst = worst.max((lhs - rhs).norm());
    }
    RealStructureReport {
        j_squared_minus_one: j_sq,
        dj_equals_jd: dj,
        antiunitary: bij,
        inner_product_residual: worst,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayMode {
    /// `[Pi(x), J Pi(y)* J^{-1}]`.
    Order0,
    /// `[[D, Pi(x)], J Pi(y)* J^{-1}]`.
    Order1,
}

/// Per-level column norms of a commutator and their ratio to an envelope `q^{w j}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayProfile {
    pub x: Gen,
    pub y: Gen,
    pub mode: DecayMode,
    pub q: f64,
    pub two_j: Vec<u32>,
    /// Largest column 2-norm among columns at that level.
    pub norm: Vec<f64>,
    /// `norm / q^{2j}`.
    pub ratio: Vec<f64>,
}

impl DecayProfile {
    pub fn ratio_at(&self, two_j: u32) -> Option<f64> {
        self.two_j
            .iter()
            .position(|t| *t == two_j)
            .map(|i| self.ratio[i])
    }

    /// `norm / q^{j}`, the envelope of the ideal generated by `L_q`.
    pub fn lq_ratio(&self) -> Vec<f64> {
        self.two_j
            .iter()
            .zip(&self.norm)
            .map(|(t, n)| n / self.q.powf(*t as f64 / 2.0))
            .collect()
    }

    /// Largest `ratio(2j) / ratio(anchor)` over `anchor <= 2j <= hi`.
    pub fn growth(&self, ratios: &[f64], anchor: u32, hi: u32) -> f64 {
        let Some(a) = self.two_j.iter().position(|t| *t == anchor) else {
            return f64::INFINITY;
        };
        let base = ratios[a];
        self.two_j
            .iter()
            .zip(ratios)
            .filter(|(t, _)| **t >= anchor && **t <= hi)
            .map(|(_, r)| r / base)
            .fold(0.0, f64::max)
    }
}

/// Operators shared by all commutant-decay profiles of one representation.
pub struct CommutantContext<'a> {
    rep: &'a Representation,
    j: AntilinearOp,
    opposite: [SparseOp; 4],
}

impl<'a> CommutantContext<'a> {
    pub fn new(rep: &'a Representation) -> Self {
        let j = reality(rep.basis());
        let opposite = Gen::ALL.map(|g| j.conjugate(rep.gen(g.star())));
        Self { rep, j, opposite }
    }

    pub fn reality(&self) -> &AntilinearOp {
        &self.j
    }

    fn opposite(&self, y: Gen) -> &SparseOp {
        let i = Gen::ALL.iter().position(|g| *g == y).unwrap_or(0);
        &self.opposite[i]
    }

    /// Profile over levels `lo..=hi`.
    pub fn profile(&self, x: Gen, y: Gen, mode: DecayMode, lo: u32, hi: u32) -> DecayProfile {
        let basis = self.rep.basis();
        let q = self.rep.q;
        let px = self.rep.gen(x);
        let dx;
        let left = match mode {
            DecayMode::Order0 => px,
            DecayMode::Order1 => {
                let cols = (0..basis.len())
                    .map(|c| {
                        let dc = dirac_twice(&basis.get(c)) as f64 / 2.0;
                        px.column(c)
                            .iter()
                            .map(|(r, v)| (*r, v * (dirac_twice(&basis.get(*r)) as f64 / 2.0 - dc)))
                            .collect()
                    })
                    .collect();
                dx = SparseOp::from_columns(basis.clone(), cols);
                &dx
            }
        };
        let o = self.opposite(y);
        let mut two_j = Vec::new();
        let mut norm = Vec::new();
        let mut ratio = Vec::new();
        for t in lo..=hi.min(basis.two_jmax()) {
            let cols: Vec<usize> = basis.level(t).collect();
            let n = left
                .commutator_columns(o, &cols)
                .iter()
                .map(norm2)
                .fold(0.0, f64::max);
            two_j.push(t);
            norm.push(n);
            ratio.push(n / q.powi(t as i32));
        }
        DecayProfile {
            x,
            y,
            mode,
            q,
            two_j,
            norm,
            ratio,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::basis::enumerate_basis;

    #[test]
    fn relations_small() {
        let b = Arc::new(enumerate_basis(10));
        let rep = Representation::new(&b, 0.5);
        let rpt = verify_relations(&rep, 4);
        assert_eq!(rpt.relations.len(), 5);
        assert!(rpt.max_residual() < 1e-12, "{rpt:?}");
        assert_eq!(rpt.unit_residual, 0.0);
    }

    #[test]
    fn unit_words_act_as_identity() {
        let b = Arc::new(enumerate_basis(8));
        let rep = Representation::new(&b, 0.3);
        let x = crate::ncalgebra::word(&[Gen::A, Gen::AStar])
            .add(&crate::ncalgebra::word(&[Gen::B, Gen::BStar]));
        assert!(x.is_one());
        let op = rep.word_op(&crate::ncalgebra::word(&[Gen::AStar, Gen::A]));
        let op2 = rep.word_op(&crate::ncalgebra::word(&[Gen::BStar, Gen::B]));
        let sum = op.add(&op2.scale(Complex64::new(0.09, 0.0)));
        let id = SparseOp::identity(b.clone());
        assert!(sum.sub(&id).max_abs_on(b.up_to(6)) < 1e-12);
    }

    #[test]
    fn real_structure_exact() {
        let b = Arc::new(enumerate_basis(7));
        let rpt = check_real_structure(&b);
        assert!(rpt.passed(), "{rpt:?}");
    }

    #[test]
    fn gradings_scale_generators() {
        let b = Arc::new(enumerate_basis(8));
        let rep = Representation::new(&b, 0.5);
        for r in grading_residuals(&rep, 2) {
            assert!(r.residual < 1e-12, "{r:?}");
        }
    }
}
