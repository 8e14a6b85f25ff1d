use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// A sparse matrix stored as one ordered map per row.
///
/// Zero entries are never stored.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, F::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {c} has the wrong length");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        self.data[r].get(&c).cloned().unwrap_or_else(F::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: F) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        let sum = match row.remove(&c) {
            Some(old) => old + v,
            None => v,
        };
        if !sum.is_zero() {
            row.insert(c, sum);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, F> {
        &self.data[r]
    }

    pub(crate) fn into_rows(self) -> Vec<BTreeMap<usize, F>> {
        self.data
    }

    /// Iterates over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.rows]; self.cols];
        for (r, c, v) in self.iter() {
            out[c][r] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row.values_mut() {
                *v = v.clone() * s.clone();
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length does not match column count"
        );
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(F::zero(), |acc, (&c, a)| acc + a.clone() * v[c].clone())
            })
            .collect()
    }

    /// Stacks blocks on top of each other; all must share a column count.
    pub fn vstack(blocks: &[&Matrix<F>]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Places blocks side by side; all must share a row count.
    pub fn hstack(blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for (r, c, v) in b.iter() {
                m.data[r].insert(c + offset, v.clone());
            }
            offset += b.cols;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for (r, c, v) in b.iter() {
                m.data[r + ro].insert(c + co, v.clone());
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Kronecker product `self ⊗ other`; row `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix<F>) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.iter() {
            for (k, l, b) in other.iter() {
                m.data[i * other.rows + k].insert(j * other.cols + l, a.clone() * b.clone());
            }
        }
        m
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;

    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &rhs.data[k] {
                    let term = a.clone() * b.clone();
                    match acc.get_mut(&c) {
                        Some(v) => *v = v.clone() + term,
                        None => {
                            acc.insert(c, term);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        out
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;

    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "cannot add matrices of different shapes"
        );
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_to(r, c, v.clone());
        }
        out
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;

    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;

    fn neg(self) -> Matrix<F> {
        self.scale(&(-F::one()))
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for (r, row) in self.data.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|(c, v)| format!("{c}: {v:?}")).collect();
            writeln!(f, "  {r}: {{{}}}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        let dense: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Matrix::from_dense(&dense).unwrap()
    }

    #[test]
    fn no_stored_zeros() {
        let mut a = m(&[&[1, 0], &[0, 2]]);
        assert_eq!(a.nnz(), 2);
        a.add_to(0, 0, int(-1));
        assert_eq!(a.nnz(), 1);
        let t = Matrix::from_triplets(2, 2, vec![(0, 1, int::<Q>(3)), (0, 1, int(-3))]);
        assert!(t.is_zero());
    }

    #[test]
    fn products_and_stacks() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.apply(&[int(1), int(1)]), vec![int(3), int(7)]);
        assert_eq!(Matrix::vstack(&[&a, &b]).shape(), (4, 2));
        assert_eq!(Matrix::hstack(&[&a, &b]).get(1, 2), int(1));
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(2, 0), int(3));
        assert_eq!(k.get(3, 1), int(3));
        assert_eq!(&(&a - &a), &Matrix::zeros(2, 2));
    }

    #[test]
    fn ragged_dense_input_rejected() {
        let rows = vec![vec![int::<Q>(1)], vec![]];
        assert!(Matrix::from_dense(&rows).is_err());
    }
}
