//! Closed-form spectra of `L(p, p-1)`, taken with `r = -1`, in the printed
//! form and in a corrected form that agrees with direct counting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{level_of, multiplicity, LensParams, Provenance, SpectrumTable};
use crate::error::LensError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormVariant {
    Printed,
    Corrected,
}

/// One `(k, l)` member of a family, compared with the counting oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub family: String,
    pub k: u32,
    pub l: u32,
    pub two_lambda: i64,
    pub mult: u64,
    /// Counted multiplicity, `None` if the eigenvalue is not a Dirac level.
    pub oracle: Option<u64>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedForm {
    pub p: u32,
    #[serde(rename = "K")]
    pub k: u32,
    pub variant: ClosedFormVariant,
    pub two_jmax: u32,
    pub families: Vec<FamilyEntry>,
    /// Entries disagreeing with the oracle.
    pub mismatches: Vec<FamilyEntry>,
    /// Counted eigenvalues with nonzero multiplicity that no family emits.
    pub uncovered: Vec<(i64, u64)>,
    #[serde(skip)]
    pub table: Option<SpectrumTable>,
}

impl ClosedForm {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && self.uncovered.is_empty()
    }

    pub fn family_agrees(&self, family: &str) -> bool {
        self.families
            .iter()
            .filter(|e| e.family == family)
            .all(|e| e.matches)
    }
}

/// A family: name, `l` range and `(k, l) -> (twice eigenvalue, multiplicity)`.
struct Family {
    name: &'static str,
    l_count: u32,
    f: Box<dyn Fn(i64, i64) -> (i64, i64)>,
}

fn families(p: u32, k_struct: u32, variant: ClosedFormVariant) -> Result<Vec<Family>, LensError> {
    let pi = p as i64;
    let big_p = pi / 2;
    let printed = variant == ClosedFormVariant::Printed;
    let fam = |name, l_count, f: Box<dyn Fn(i64, i64) -> (i64, i64)>| Family { name, l_count, f };
    if p % 2 == 1 && k_struct == 0 {
        let neg_a: Box<dyn Fn(i64, i64) -> (i64, i64)> = if printed {
            Box::new(move |k, l| {
                (
                    -4 * k * pi - 4 * l - 3,
                    2 * (2 * k + 1) * (k * pi + 2 * l + 1),
                )
            })
        } else {
            Box::new(move |k, l| (-4 * k * pi - 4 * l - 3, 2 * (2 * k + 1) * (k * pi + l + 1)))
        };
        let neg_b: Box<dyn Fn(i64, i64) -> (i64, i64)> = if printed {
            Box::new(move |k, l| {
                (
                    -2 * (2 * k + 1) * pi - 4 * l + 1,
                    (2 * k + 2) * ((2 * k + 1) * pi + 2 * l + 2),
                )
            })
        } else {
            Box::new(move |k, l| {
                (
                    -2 * (2 * k + 1) * pi - 4 * l - 3,
                    (2 * k + 2) * ((2 * k + 1) * pi + 2 * l + 2),
                )
            })
        };
        return Ok(vec![
            fam(
                "positive_a",
                p,
                Box::new(move |k, l| (4 * k * pi + 4 * l + 1, 2 * (2 * k + 1) * (k * pi + l))),
            ),
            fam(
                "positive_b",
                p,
                Box::new(move |k, l| {
                    (
                        2 * (2 * k + 1) * pi + 4 * l + 1,
                        (2 * k + 2) * ((2 * k + 1) * pi + 2 * l),
                    )
                }),
            ),
            fam("negative_a", p, neg_a),
            fam("negative_b", p, neg_b),
        ]);
    }
    if p.is_multiple_of(2) && k_struct == 0 {
        if printed {
            return Ok(vec![
                fam(
                    "positive",
                    p,
                    Box::new(move |k, l| (4 * k * pi + 4 * l + 1, 2 * (2 * k + 1) * (k * pi + l))),
                ),
                fam(
                    "negative",
                    p,
                    Box::new(move |k, l| {
                        (-4 * k * pi - 4 * l - 3, 2 * (2 * k + 1) * (k * pi + l + 1))
                    }),
                ),
            ]);
        }
        return Ok(vec![
            fam(
                "positive",
                big_p as u32,
                Box::new(move |k, l| (2 * k * pi + 4 * l + 1, 2 * (2 * k + 1) * (k * big_p + l))),
            ),
            fam(
                "negative",
                big_p as u32,
                Box::new(move |k, l| {
                    (
                        -2 * k * pi - 4 * l - 3,
                        2 * (2 * k + 1) * (k * big_p + l + 1),
                    )
                }),
            ),
        ]);
    }
    if p.is_multiple_of(2) && k_struct as i64 == big_p {
        let m = if printed { pi } else { big_p };
        return Ok(vec![
            fam(
                "positive",
                big_p as u32,
                Box::new(move |k, l| {
                    (
                        2 * (2 * k + 1) * big_p + 4 * l + 1,
                        (2 * k + 2) * ((2 * k + 1) * m + 2 * l),
                    )
                }),
            ),
            fam(
                "negative",
                big_p as u32,
                Box::new(move |k, l| {
                    (
                        -2 * (2 * k + 1) * big_p - 4 * l - 3,
                        (2 * k + 2) * ((2 * k + 1) * m + 2 * l + 2),
                    )
                }),
            ),
        ]);
    }
    Err(LensError::UnsupportedClosedForm { p, k: k_struct })
}

fn level_bound(two_lambda: i64) -> i64 {
    if two_lambda > 0 {
        (two_lambda - 3) / 2
    } else {
        (-two_lambda - 1) / 2
    }
}

/// Closed-form spectrum for `r = -1` with structure `K`, compared against counting.
pub fn closed_form_spectrum(
    p: u32,
    k_struct: u32,
    two_jmax: u32,
    variant: ClosedFormVariant,
) -> Result<ClosedForm, LensError> {
    if p < 2 {
        return Err(LensError::UnsupportedClosedForm { p, k: k_struct });
    }
    let params = LensParams::raw(p, -1, k_struct as i64)?;
    let fams = families(p, k_struct, variant)?;
    let mut entries = Vec::new();
    for fam in &fams {
        for k in 0.. {
            let (first, _) = (fam.f)(k, 0);
            if level_bound(first) > two_jmax as i64 {
                break;
            }
            for l in 0..fam.l_count as i64 {
                let (two_lambda, mult) = (fam.f)(k, l);
                if level_bound(two_lambda) > two_jmax as i64 {
                    continue;
                }
                let oracle = level_of(two_lambda).map(|(t, a)| multiplicity(t, a, &params));
                let mult = mult.max(0) as u64;
                let matches = oracle.unwrap_or(0) == mult;
                entries.push(FamilyEntry {
                    family: fam.name.to_string(),
                    k: k as u32,
                    l: l as u32,
                    two_lambda,
                    mult,
                    oracle,
                    matches,
                });
            }
        }
    }
    let mut table = BTreeMap::new();
    for e in &entries {
        *table.entry(e.two_lambda).or_insert(0) += e.mult;
    }
    let counted = super::spectrum(&params, two_jmax);
    let uncovered = counted
        .entries
        .iter()
        .filter(|(l, m)| **m > 0 && !table.contains_key(l))
        .map(|(l, m)| (*l, *m))
        .collect();
    let mismatches = entries.iter().filter(|e| !e.matches).cloned().collect();
    let provenance = match variant {
        ClosedFormVariant::Printed => Provenance::ClosedFormPrinted,
        ClosedFormVariant::Corrected => Provenance::ClosedFormCorrected,
    };
    Ok(ClosedForm {
        p,
        k: k_struct,
        variant,
        two_jmax,
        families: entries,
        mismatches,
        uncovered,
        table: Some(SpectrumTable {
            p,
            r: -1,
            k: k_struct,
            two_jmax,
            provenance,
            entries: table,
        }),
    })
}
