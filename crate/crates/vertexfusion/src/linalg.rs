//! Sparse exact linear algebra over the base field.
//!
//! Row-major sparse matrices with deterministic reduced row echelon form,
//! kernels and rank. Pivoting is leftmost-column first-row, so echelon
//! bases are reproducible across runs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse vector: index -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVec {
    pub entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(i: usize) -> Self {
        let mut v = SparseVec::new();
        v.entries.insert(i, Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, a) in &other.entries {
            let v = self.get(*i) + a.clone() * c.clone();
            self.set(*i, v);
        }
    }

    pub fn scale(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for a in self.entries.values_mut() {
            *a = a.clone() * c.clone();
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let (small, big) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Scalar::zero();
        for (i, a) in &small.entries {
            if let Some(b) = big.entries.get(i) {
                acc += a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn first_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }
}

/// Sparse row-major matrix.
#[derive(Debug, Clone, Default)]
pub struct SparseMat {
    pub rows: Vec<SparseVec>,
    pub ncols: usize,
}

impl SparseMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            rows: vec![SparseVec::new(); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.rows[i].set(i, Scalar::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.rows[r].set(c, v);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut t = SparseMat::zero(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in &row.entries {
                t.rows[*c].set(r, v.clone());
            }
        }
        t
    }

    /// Matrix product self * rhs.
    pub fn mat_mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols, rhs.nrows(), "matrix product shape mismatch");
        let mut out = SparseMat::zero(self.nrows(), rhs.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in &row.entries {
                out.rows[r].add_scaled(&rhs.rows[*k], a);
            }
        }
        out
    }

    /// self * v for a column vector v.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let d = row.dot(v);
            if !d.is_zero() {
                out.set(r, d);
            }
        }
        out
    }

    pub fn add(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols, rhs.ncols);
        assert_eq!(self.nrows(), rhs.nrows());
        let mut out = self.clone();
        for (r, row) in rhs.rows.iter().enumerate() {
            out.rows[r].add_scaled(row, &Scalar::one());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        let mut out = self.clone();
        for row in &mut out.rows {
            row.scale(c);
        }
        out
    }

    pub fn neg(&self) -> SparseMat {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        self.add(&rhs.neg())
    }

    /// In-place reduced row echelon form. Returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut target = 0usize;
        for col in 0..self.ncols {
            let Some(src) = (target..self.rows.len()).find(|&r| !self.rows[r].get(col).is_zero())
            else {
                continue;
            };
            self.rows.swap(target, src);
            let inv = self.rows[target]
                .get(col)
                .inv()
                .expect("pivot entry nonzero");
            self.rows[target].scale(&inv);
            let pivot_row = self.rows[target].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r == target {
                    continue;
                }
                let c = row.get(col);
                if !c.is_zero() {
                    row.add_scaled(&pivot_row, &(-c));
                }
            }
            pivots.push(col);
            target += 1;
            if target == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(target);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, in reduced echelon form with respect to
    /// the free columns in increasing order. Deterministic.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = SparseVec::new();
            v.set(free, Scalar::one());
            for (prow, pcol) in pivots.iter().enumerate() {
                let c = m.rows[prow].get(free);
                if !c.is_zero() {
                    v.set(*pcol, -c);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Dense inverse for small matrices.
    pub fn inverse(&self) -> Result<SparseMat> {
        let n = self.nrows();
        if n != self.ncols {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let mut aug = SparseMat::zero(n, 2 * n);
        for r in 0..n {
            for (c, v) in &self.rows[r].entries {
                aug.rows[r].set(*c, v.clone());
            }
            aug.rows[r].set(n + r, Scalar::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix);
        }
        let mut inv = SparseMat::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                let v = aug.rows[r].get(n + c);
                if !v.is_zero() {
                    inv.rows[r].set(c, v);
                }
            }
        }
        Ok(inv)
    }
}

/// Row space of `rows` in reduced echelon form: the canonical basis of the
/// spanned subspace. Deterministic for equality comparisons.
pub fn row_space_rref(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut m = SparseMat {
        rows: rows.to_vec(),
        ncols,
    };
    m.rref();
    m.rows
}

/// Tests whether `v` lies in the row space given by an RREF basis.
pub fn in_row_space(basis: &[SparseVec], v: &SparseVec) -> bool {
    let mut w = v.clone();
    for b in basis {
        if let Some(p) = b.first_index() {
            let c = w.get(p);
            if !c.is_zero() {
                w.add_scaled(b, &(-c));
            }
        }
    }
    w.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = SparseMat::zero(3, 3);
        m.set(0, 0, s(1));
        m.set(0, 1, s(2));
        m.set(1, 1, s(1));
        m.set(2, 0, s(1));
        m.set(2, 1, s(3));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_one() {
        // x + 2y + 3z = 0
        let mut m = SparseMat::zero(1, 3);
        m.set(0, 0, s(1));
        m.set(0, 1, s(2));
        m.set(0, 2, s(3));
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut m = SparseMat::zero(2, 2);
        m.set(0, 0, s(2));
        m.set(0, 1, s(1));
        m.set(1, 0, s(5));
        m.set(1, 1, s(3));
        let inv = m.inverse().unwrap();
        let prod = m.mat_mul(&inv);
        assert_eq!(prod.get(0, 0), s(1));
        assert_eq!(prod.get(0, 1), s(0));
        assert_eq!(prod.get(1, 1), s(1));

        let mut sing = SparseMat::zero(2, 2);
        sing.set(0, 0, s(1));
        sing.set(1, 0, s(2));
        assert!(matches!(sing.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn row_space_membership() {
        let rows = vec![
            {
                let mut v = SparseVec::new();
                v.set(0, s(1));
                v.set(2, s(1));
                v
            },
            {
                let mut v = SparseVec::new();
                v.set(1, s(1));
                v
            },
        ];
        let basis = row_space_rref(&rows, 3);
        let mut inside = SparseVec::new();
        inside.set(0, s(2));
        inside.set(1, s(-1));
        inside.set(2, s(2));
        assert!(in_row_space(&basis, &inside));
        let mut outside = SparseVec::new();
        outside.set(2, s(1));
        assert!(!in_row_space(&basis, &outside));
    }
}
