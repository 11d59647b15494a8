//! The Z/p action on the spinor space, invariant subspaces `H_K`, Dirac
//! spectra by direct counting, and lattice diagrams.

mod closed_form;
mod lattice;

pub use closed_form::{closed_form_spectrum, ClosedForm, ClosedFormVariant, FamilyEntry};
pub use lattice::{lattice_diagram, LatticeDiagram, Marker};

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LensError;
use crate::hilbert::{n_bound, Arrow, BasisVector, SparseOp, TruncatedBasis};

/// `(p, r, K)` with `gcd(p, r) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensParams {
    pub p: u32,
    pub r: i64,
    /// `r` as supplied before normalization.
    pub r_input: i64,
    #[serde(rename = "K")]
    pub k: u32,
    /// `(r + 1) mod 2`.
    pub epsilon: u8,
}

fn epsilon(r: i64) -> u8 {
    (r + 1).rem_euclid(2) as u8
}

impl LensParams {
    /// Unnormalized parameters; `epsilon` follows `r`.
    pub fn raw(p: u32, r: i64, k: i64) -> Result<Self, LensError> {
        if p == 0 {
            return Err(LensError::ZeroP);
        }
        if num_integer::gcd(p as i64, r) != 1 {
            return Err(LensError::NotCoprime { p, r });
        }
        Ok(Self {
            p,
            r,
            r_input: r,
            k: k.rem_euclid(p as i64) as u32,
            epsilon: epsilon(r),
        })
    }

    pub fn with_k(self, k: i64) -> Self {
        Self {
            k: k.rem_euclid(self.p as i64) as u32,
            ..self
        }
    }

    /// The same action with `r` replaced by `-r` (used for the orientation-reversing equivalence).
    pub fn negated(self) -> Self {
        Self {
            r: -self.r,
            r_input: -self.r_input,
            epsilon: epsilon(-self.r),
            ..self
        }
    }
}

/// Replaces `r` by an odd representative in `(-p, p)`; odd `r` already in range is kept.
pub fn normalize(p: u32, r: i64) -> Result<LensParams, LensError> {
    let raw = LensParams::raw(p, r, 0)?;
    let pi = p as i64;
    let norm = if p == 1 {
        1
    } else if r.rem_euclid(2) == 1 && r.abs() < pi {
        r
    } else {
        let r0 = r.rem_euclid(pi);
        if r0 % 2 == 1 {
            r0
        } else {
            r0 - pi
        }
    };
    Ok(LensParams {
        r: norm,
        epsilon: epsilon(norm),
        ..raw
    })
}

/// Exponent `(1+r)mu + (1-r)n + eps/2 (mod p)` of the Z/p phase.
pub fn zp_exponent(two_mu: i64, two_n: i64, params: &LensParams) -> u32 {
    let r = params.r;
    let twice = (1 + r) * two_mu + (1 - r) * two_n + params.epsilon as i64;
    debug_assert!(twice % 2 == 0, "phase exponent is not an integer");
    (twice / 2).rem_euclid(params.p as i64) as u32
}

pub fn zp_phase_exponent(v: &BasisVector, params: &LensParams) -> u32 {
    zp_exponent(v.two_mu as i64, v.two_n as i64, params)
}

/// Indices of `H_K` inside the truncation.
pub fn subspace(basis: &TruncatedBasis, params: &LensParams) -> Vec<usize> {
    (0..basis.len())
        .filter(|&i| zp_phase_exponent(&basis.get(i), params) == params.k)
        .collect()
}

/// Values of `K` giving irreducible almost real structures.
pub fn irreducible_structures(p: u32) -> Vec<u32> {
    if p.is_multiple_of(2) {
        vec![0, p / 2]
    } else {
        vec![0]
    }
}

/// Number of `(mu, n)` at level `(j, arrow)` satisfying the congruence.
pub fn multiplicity(two_j: u32, arrow: Arrow, params: &LensParams) -> u64 {
    let Some(nb) = n_bound(two_j, arrow) else {
        return 0;
    };
    let tj = two_j as i64;
    let mut count = 0;
    for two_mu in (-tj..=tj).step_by(2) {
        for two_n in (-(nb as i64)..=nb as i64).step_by(2) {
            if zp_exponent(two_mu, two_n, params) == params.k {
                count += 1;
            }
        }
    }
    count
}

/// Twice the Dirac eigenvalue on a level.
pub fn twice_eigenvalue(two_j: u32, arrow: Arrow) -> i64 {
    match arrow {
        Arrow::Up => 2 * two_j as i64 + 3,
        Arrow::Down => -(2 * two_j as i64 + 1),
    }
}

/// Level carrying a given doubled eigenvalue, if any.
pub fn level_of(two_lambda: i64) -> Option<(u32, Arrow)> {
    if two_lambda >= 3 && (two_lambda - 3) % 2 == 0 {
        Some((((two_lambda - 3) / 2) as u32, Arrow::Up))
    } else if two_lambda <= -3 && (-two_lambda - 1) % 2 == 0 {
        Some((((-two_lambda - 1) / 2) as u32, Arrow::Down))
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Enumerated,
    ClosedFormPrinted,
    ClosedFormCorrected,
}

/// Doubled eigenvalue to multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub p: u32,
    pub r: i64,
    pub k: u32,
    pub two_jmax: u32,
    pub provenance: Provenance,
    pub entries: BTreeMap<i64, u64>,
}

impl SpectrumTable {
    pub fn mult(&self, two_lambda: i64) -> u64 {
        self.entries.get(&two_lambda).copied().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    two_lambda: i64,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    p: u32,
    r: i64,
    #[serde(rename = "K")]
    k: u32,
    two_jmax: u32,
    provenance: Provenance,
    entries: Vec<EntryRepr>,
}

impl Serialize for SpectrumTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableRepr {
            p: self.p,
            r: self.r,
            k: self.k,
            two_jmax: self.two_jmax,
            provenance: self.provenance,
            entries: self
                .entries
                .iter()
                .map(|(l, m)| EntryRepr {
                    two_lambda: *l,
                    mult: *m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectrumTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TableRepr::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in t.entries {
            if entries.insert(e.two_lambda, e.mult).is_some() {
                return Err(D::Error::custom("duplicate eigenvalue"));
            }
        }
        Ok(SpectrumTable {
            p: t.p,
            r: t.r,
            k: t.k,
            two_jmax: t.two_jmax,
            provenance: t.provenance,
            entries,
        })
    }
}

/// Dirac spectrum on `H_K` by direct counting, one entry per level up to `two_jmax`.
pub fn spectrum(params: &LensParams, two_jmax: u32) -> SpectrumTable {
    let mut entries = BTreeMap::new();
    for two_j in 0..=two_jmax {
        for arrow in [Arrow::Up, Arrow::Down] {
            if n_bound(two_j, arrow).is_none() {
                continue;
            }
            entries.insert(
                twice_eigenvalue(two_j, arrow),
                multiplicity(two_j, arrow, params),
            );
        }
    }
    SpectrumTable {
        p: params.p,
        r: params.r,
        k: params.k,
        two_jmax,
        provenance: Provenance::Enumerated,
        entries,
    }
}

/// The label swap `(j, mu, n, up) <-> (j + 1/2, n, mu, down)`.
pub fn swap_label(v: &BasisVector) -> BasisVector {
    match v.arrow {
        Arrow::Up => BasisVector {
            two_j: v.two_j + 1,
            arrow: Arrow::Down,
            two_mu: v.two_n,
            two_n: v.two_mu,
        },
        Arrow::Down => BasisVector {
            two_j: v.two_j - 1,
            arrow: Arrow::Up,
            two_mu: v.two_n,
            two_n: v.two_mu,
        },
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceMap {
    pub p: u32,
    pub r: i64,
    #[serde(rename = "K")]
    pub k: u32,
    /// `(source, image)` index pairs for sources in `H_K(p, r)`.
    pub pairs: Vec<(usize, usize)>,
    /// Sources whose image leaves the truncation.
    pub dropped: Vec<usize>,
    /// Image equals `H_K(p, -r)` on the part of the truncation the map reaches.
    pub image_matches: bool,
}

/// Index map `H_K(p, r) -> H_K(p, -r)`; phases of the intertwiner are not built.
pub fn equivalence_bijection(basis: &TruncatedBasis, params: &LensParams) -> EquivalenceMap {
    let target = params.negated();
    let mut pairs = Vec::new();
    let mut dropped = Vec::new();
    for i in subspace(basis, params) {
        match basis.index_of(&swap_label(&basis.get(i))) {
            Some(t) => pairs.push((i, t)),
            None => dropped.push(i),
        }
    }
    let image: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
    let expected: BTreeSet<usize> = subspace(basis, &target)
        .into_iter()
        .filter(|&t| basis.index_of(&swap_label(&basis.get(t))).is_some())
        .collect();
    EquivalenceMap {
        p: params.p,
        r: params.r,
        k: params.k,
        pairs,
        dropped,
        image_matches: image == expected,
    }
}

/// `N_up(r, K)(j) = N_down(-r, K)(j + 1/2)` for all `two_j <= two_jmax`.
pub fn equivalence_multiplicities_agree(params: &LensParams, two_jmax: u32) -> bool {
    let neg = params.negated();
    (0..=two_jmax)
        .all(|t| multiplicity(t, Arrow::Up, params) == multiplicity(t + 1, Arrow::Down, &neg))
}

/// Nonzero entries of `op` taking a vector of `H_K` outside `H_K`.
pub fn leakage(op: &SparseOp, params: &LensParams) -> usize {
    let basis = op.basis();
    let inside: BTreeSet<usize> = subspace(basis, params).into_iter().collect();
    inside
        .iter()
        .map(|&c| {
            op.column(c)
                .iter()
                .filter(|(r, v)| v.norm() != 0.0 && !inside.contains(r))
                .count()
        })
        .sum()
}
