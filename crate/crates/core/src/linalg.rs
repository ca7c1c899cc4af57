//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use crate::error::{AdeleError, Result};
use crate::field::Field;

/// Row-major dense matrix. Maps act on column vectors: `rows = target`,
/// `cols = source`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elt>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.fmt_elt(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon<K: Field> {
    pub matrix: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> Matrix<K> {
    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &K, rows: Vec<Vec<K::Elt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Self {
            field: field.clone(),
            rows: r,
            cols,
            data,
        }
    }

    /// Build from column vectors of length `rows`.
    pub fn from_cols(field: &K, rows: usize, cols: &[Vec<K::Elt>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K::Elt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K::Elt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K::Elt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<K::Elt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(AdeleError::RankMismatch(self.cols, o.rows));
        }
        let k = &self.field;
        let mut m = Self::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if k.is_zero(b) {
                        continue;
                    }
                    let v = k.add(m.get(i, j), &k.mul(a, b));
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[K::Elt]) -> Vec<K::Elt> {
        assert_eq!(v.len(), self.cols, "vector length");
        let k = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(AdeleError::RankMismatch(self.rows * self.cols, o.rows * o.cols));
        }
        let k = &self.field;
        Ok(Self {
            field: k.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| k.add(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &K::Elt) -> Self {
        let k = &self.field;
        Self {
            field: k.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| k.mul(a, c)).collect(),
        }
    }

    /// `[self | o]`
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "hstack row count");
        let mut m = Self::zeros(&self.field, self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                m.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }

    /// `[self ; o]`
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "vstack column count");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Self {
            field: self.field.clone(),
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[Self], field: &K) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.put(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Add `block` into the submatrix starting at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let v = self.field.add(self.get(r0 + r, c0 + c), block.get(r, c));
                self.set(r0 + r, c0 + c, v);
            }
        }
    }

    /// Columns `idx` of `self`.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<K::Elt>> = idx.iter().map(|&c| self.col(c)).collect();
        Self::from_cols(&self.field, self.rows, &cols)
    }

    pub fn echelon(&self) -> Echelon<K> {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || k.is_zero(m.get(i, c)) {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = k.sub(m.get(i, j), &k.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<K::Elt>> {
        let k = &self.field;
        let e = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![k.zero(); self.cols];
            v[free] = k.one();
            for (r, &p) in e.pivots.iter().enumerate() {
                v[p] = k.neg(e.matrix.get(r, free));
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `self * x = b`, or `None`.
    pub fn solve(&self, b: &[K::Elt]) -> Option<Vec<K::Elt>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let k = &self.field;
        let aug = self.hstack(&Self::from_cols(k, self.rows, &[b.to_vec()]));
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![k.zero(); self.cols];
        for (r, &p) in e.pivots.iter().enumerate() {
            x[p] = e.matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let e = self.hstack(&Self::identity(&self.field, n)).echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(e.matrix.select_cols(&idx))
    }
}

/// Incremental span membership: tracks an echelon basis of the vectors
/// added so far.
pub struct SpanTracker<K: Field> {
    field: K,
    dim: usize,
    // reduced basis rows with their pivot positions
    basis: Vec<(usize, Vec<K::Elt>)>,
}

impl<K: Field> SpanTracker<K> {
    pub fn new(field: &K, dim: usize) -> Self {
        Self {
            field: field.clone(),
            dim,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &[K::Elt]) -> Vec<K::Elt> {
        let k = &self.field;
        let mut v = v.to_vec();
        for (p, b) in &self.basis {
            if k.is_zero(&v[*p]) {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                *x = k.sub(x, &k.mul(&f, y));
            }
        }
        v
    }

    pub fn contains(&self, v: &[K::Elt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[K::Elt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let k = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !k.is_zero(x)) else {
            return false;
        };
        let inv = k.inv(&r[p]).unwrap();
        for x in r.iter_mut() {
            *x = k.mul(x, &inv);
        }
        for (_, b) in self.basis.iter_mut() {
            if !k.is_zero(&b[p]) {
                let f = b[p].clone();
                for (x, y) in b.iter_mut().zip(&r) {
                    *x = k.sub(x, &k.mul(&f, y));
                }
            }
        }
        self.basis.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn m(k: &PrimeField, rows: &[&[u64]]) -> Matrix<PrimeField> {
        let cols = rows[0].len();
        Matrix::from_rows(k, rows.iter().map(|r| r.to_vec()).collect(), cols)
    }

    #[test]
    fn rank_nullity() {
        let k = f5();
        let a = m(&k, &[&[1, 2, 3, 4], &[0, 1, 2, 3], &[1, 3, 0, 2]]);
        // third row = first + second (mod 5)
        assert_eq!(a.rank(), 2);
        let ker = a.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.apply(v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let k = f5();
        let a = m(&k, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&k, 2));
        let x = a.solve(&[3, 4]).unwrap();
        assert_eq!(a.apply(&x), vec![3, 4]);
        let sing = m(&k, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[1, 0]).is_none());
    }

    #[test]
    fn span_tracker_matches_rank() {
        let q = Rationals;
        let vs: Vec<Vec<_>> = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| q.integer(x)).collect())
            .collect();
        let mut s = SpanTracker::new(&q, 3);
        let grew: Vec<bool> = vs.iter().map(|v| s.insert(v)).collect();
        assert_eq!(grew, vec![true, false, true, false]);
        assert_eq!(s.rank(), Matrix::from_rows(&q, vs, 3).rank());
    }
}
