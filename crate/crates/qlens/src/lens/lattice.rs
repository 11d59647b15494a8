use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{zp_exponent, LensParams};
use crate::error::LensError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    /// In `H_K`, integer `j`.
    Star,
    /// In `H_K`, half-integer `j`.
    Diamond,
    /// A basis site outside `H_K`.
    Circle,
    /// Not a basis site.
    Empty,
}

impl Marker {
    pub fn ascii(self) -> char {
        match self {
            Marker::Star => '*',
            Marker::Diamond => '#',
            Marker::Circle => '.',
            Marker::Empty => ' ',
        }
    }
}

/// Sites `(two_mu, two_n)` with `|two_mu| <= range + 1`, `|two_n| <= range`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeDiagram {
    pub p: u32,
    pub r: i64,
    #[serde(rename = "K")]
    pub k: u32,
    pub range: u32,
    pub cells: BTreeMap<(i32, i32), Marker>,
}

pub fn lattice_diagram(params: &LensParams, range: u32) -> Result<LatticeDiagram, LensError> {
    if range < 1 {
        return Err(LensError::BadRange);
    }
    let (hm, hn) = (range as i32 + 1, range as i32);
    let mut cells = BTreeMap::new();
    for two_mu in -hm..=hm {
        for two_n in -hn..=hn {
            let marker = if (two_mu + two_n).rem_euclid(2) == 0 {
                Marker::Empty
            } else if zp_exponent(two_mu as i64, two_n as i64, params) != params.k {
                Marker::Circle
            } else if two_mu % 2 == 0 {
                Marker::Star
            } else {
                Marker::Diamond
            };
            cells.insert((two_mu, two_n), marker);
        }
    }
    Ok(LatticeDiagram {
        p: params.p,
        r: params.r,
        k: params.k,
        range,
        cells,
    })
}

impl LatticeDiagram {
    fn mu_extent(&self) -> i32 {
        self.range as i32 + 1
    }

    fn n_extent(&self) -> i32 {
        self.range as i32
    }

    pub fn marker(&self, two_mu: i32, two_n: i32) -> Marker {
        self.cells
            .get(&(two_mu, two_n))
            .copied()
            .unwrap_or(Marker::Empty)
    }

    /// `n` increases upwards, `mu` to the right; one character per half-unit.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        for two_n in (-self.n_extent()..=self.n_extent()).rev() {
            let row: Vec<String> = (-self.mu_extent()..=self.mu_extent())
                .map(|two_mu| self.marker(two_mu, two_n).ascii().to_string())
                .collect();
            out.push_str(row.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let step = 20.0;
        let (hm, hn) = (self.mu_extent(), self.n_extent());
        let w = (2 * hm + 2) as f64 * step;
        let h = (2 * hn + 2) as f64 * step;
        let x = |two_mu: f64| (two_mu + hm as f64 + 1.0) * step;
        let y = |two_n: f64| (hn as f64 + 1.0 - two_n) * step;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
        );
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(
            s,
            "<title>H_{} for p={}, r={}</title>",
            self.k, self.p, self.r
        );
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
        );
        for two_j in (0..=hn - 1).step_by(2) {
            let (mu, n) = (two_j as f64, two_j as f64 + 1.0);
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="gray" stroke-dasharray="4,3"/>"#,
                x(-mu),
                y(n),
                x(mu) - x(-mu),
                y(-n) - y(n)
            );
        }
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="7" fill="none" stroke="black"/>"#,
            x(0.0),
            y(0.0)
        );
        for (&(two_mu, two_n), m) in &self.cells {
            let (cx, cy) = (x(two_mu as f64), y(two_n as f64));
            match m {
                Marker::Star => {
                    let pts: Vec<String> = (0..10)
                        .map(|i| {
                            let rad = if i % 2 == 0 { 6.0 } else { 2.6 };
                            let a = std::f64::consts::PI * (i as f64 / 5.0 - 0.5);
                            format!("{:.1},{:.1}", cx + rad * a.cos(), cy + rad * a.sin())
                        })
                        .collect();
                    let _ = writeln!(s, r#"<polygon points="{}" fill="black"/>"#, pts.join(" "));
                }
                Marker::Diamond => {
                    let _ = writeln!(
                        s,
                        r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="black"/>"#,
                        cx,
                        cy - 5.5,
                        cx + 5.5,
                        cy,
                        cx,
                        cy + 5.5,
                        cx - 5.5,
                        cy
                    );
                }
                Marker::Circle => {
                    let _ = writeln!(
                        s,
                        r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="2.5" fill="#a6a6a6"/>"##
                    );
                }
                Marker::Empty => {
                    let _ = writeln!(
                        s,
                        r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="1" fill="#e6e6e6"/>"##
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::normalize;

    #[test]
    fn origin_is_never_a_site() {
        for (p, r) in [(2, 1), (5, 1), (7, 3)] {
            let d = lattice_diagram(&normalize(p, r).unwrap(), 4).unwrap();
            assert_eq!(d.marker(0, 0), Marker::Empty);
        }
    }

    #[test]
    fn p2_markers() {
        let d = lattice_diagram(&normalize(2, 1).unwrap(), 6).unwrap();
        assert_eq!(d.marker(0, 1), Marker::Star);
        assert_eq!(d.marker(1, 0), Marker::Circle);
        assert_eq!(d.marker(2, 1), Marker::Star);
    }

    #[test]
    fn range_zero_rejected() {
        assert_eq!(
            lattice_diagram(&normalize(2, 1).unwrap(), 0).unwrap_err(),
            LensError::BadRange
        );
    }

    #[test]
    fn svg_is_deterministic() {
        let d = lattice_diagram(&normalize(5, -3).unwrap(), 6).unwrap();
        assert_eq!(d.to_svg(), d.to_svg());
        assert!(d.to_svg().starts_with("<?xml"));
    }
}
