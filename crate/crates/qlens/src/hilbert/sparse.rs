use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::basis::{BasisVector, TruncatedBasis};

/// Sparse vector as sorted `(index, value)` pairs.
pub type SparseVec = Vec<(usize, Complex64)>;

/// Sums duplicate indices and drops exact zeros.
pub fn compress(mut v: SparseVec) -> SparseVec {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| e.1 != Complex64::new(0.0, 0.0));
    out
}

pub fn max_abs(v: &SparseVec) -> f64 {
    v.iter().map(|e| e.1.norm()).fold(0.0, f64::max)
}

pub fn norm2(v: &SparseVec) -> f64 {
    v.iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub_vec(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut all = a.clone();
    all.extend(b.iter().map(|(i, x)| (*i, -x)));
    compress(all)
}

/// Column-compressed complex operator on a truncated basis.
#[derive(Clone, Debug)]
pub struct SparseOp {
    basis: Arc<TruncatedBasis>,
    cols: Vec<SparseVec>,
}

impl SparseOp {
    pub fn from_columns(basis: Arc<TruncatedBasis>, cols: Vec<SparseVec>) -> Self {
        assert_eq!(basis.len(), cols.len());
        Self { basis, cols }
    }

    pub fn zero(basis: Arc<TruncatedBasis>) -> Self {
        let n = basis.len();
        Self::from_columns(basis, vec![Vec::new(); n])
    }

    pub fn identity(basis: Arc<TruncatedBasis>) -> Self {
        Self::diagonal(basis, |_| Complex64::new(1.0, 0.0))
    }

    pub fn diagonal<F: Fn(&BasisVector) -> Complex64>(basis: Arc<TruncatedBasis>, f: F) -> Self {
        let cols = basis
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| compress(vec![(i, f(v))]))
            .collect();
        Self::from_columns(basis, cols)
    }

    pub fn basis(&self) -> &Arc<TruncatedBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn max_column_nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(pos) => self.cols[c][pos].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, x) in v {
            out.extend(self.cols[*i].iter().map(|(r, y)| (*r, y * x)));
        }
        compress(out)
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        let cols = other.cols.par_iter().map(|col| self.apply(col)).collect();
        SparseOp::from_columns(self.basis.clone(), cols)
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &SparseOp) -> SparseOp {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &SparseOp, s: Complex64) -> SparseOp {
        let cols = self
            .cols
            .par_iter()
            .zip(other.cols.par_iter())
            .map(|(a, b)| {
                let mut v = a.clone();
                v.extend(b.iter().map(|(i, x)| (*i, x * s)));
                compress(v)
            })
            .collect();
        SparseOp::from_columns(self.basis.clone(), cols)
    }

    pub fn scale(&self, s: Complex64) -> SparseOp {
        let cols = self
            .cols
            .iter()
            .map(|col| compress(col.iter().map(|(i, x)| (*i, x * s)).collect()))
            .collect();
        SparseOp::from_columns(self.basis.clone(), cols)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseOp {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.dim()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                cols[*r].push((c, x.conj()));
            }
        }
        SparseOp::from_columns(self.basis.clone(), cols)
    }

    /// `[self, other]` restricted to the given columns.
    pub fn commutator_columns(&self, other: &SparseOp, cols: &[usize]) -> Vec<SparseVec> {
        cols.par_iter()
            .map(|&c| {
                let ab = self.apply(other.column(c));
                let ba = other.apply(self.column(c));
                sub_vec(&ab, &ba)
            })
            .collect()
    }

    /// Largest entry modulus over the given columns.
    pub fn max_abs_on(&self, cols: impl IntoIterator<Item = usize>) -> f64 {
        cols.into_iter()
            .map(|c| max_abs(&self.cols[c]))
            .fold(0.0, f64::max)
    }

    pub fn to_coo(&self) -> CooMatrix {
        let mut out = CooMatrix::default();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                out.rows.push(*r);
                out.cols.push(c);
                out.re.push(x.re);
                out.im.push(x.im);
            }
        }
        out
    }
}

/// Coordinate-list dump of a [`SparseOp`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct CooMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::basis::enumerate_basis;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn compress_merges_and_drops() {
        let v = compress(vec![(3, c(1.0)), (1, c(2.0)), (3, c(-1.0)), (1, c(1.0))]);
        assert_eq!(v, vec![(1, c(3.0))]);
    }

    #[test]
    fn identity_and_adjoint() {
        let b = Arc::new(enumerate_basis(2));
        let id = SparseOp::identity(b.clone());
        assert_eq!(id.nnz(), b.len());
        let mut cols = vec![Vec::new(); b.len()];
        cols[0] = vec![(4, Complex64::new(1.0, 2.0))];
        let t = SparseOp::from_columns(b, cols);
        assert_eq!(t.adjoint().entry(0, 4), Complex64::new(1.0, -2.0));
        assert_eq!(t.mul(&id).entry(4, 0), t.entry(4, 0));
    }
}
