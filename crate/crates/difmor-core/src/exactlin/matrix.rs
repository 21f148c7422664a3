//! Sparse rational matrices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Bound;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A sparse matrix over the rationals.
///
/// Entries live in a `BTreeMap` keyed by `(row, col)`, so iteration is
/// row-major and fully deterministic, and exact zeros are never stored:
/// `set` and `add_to` drop entries that cancel to zero. Equality is
/// structural equality of dimensions plus stored entries, which, thanks to
/// the no-zeros invariant, is exact mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    /// The `rows × cols` zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    /// The `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Scalar::one());
        }
        m
    }

    /// Build from dense rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zero(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Dimension {
                    context: "matrix row length",
                    expected: ncols,
                    got: row.len(),
                });
            }
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored (hence nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at `(r, c)`, cloning; zero if absent.
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.check_index(r, c);
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Borrowed entry at `(r, c)` if nonzero.
    pub fn entry(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.entries.get(&(r, c))
    }

    /// Overwrite entry `(r, c)`; storing zero removes it.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.check_index(r, c);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Add `v` into entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: Scalar) {
        self.check_index(r, c);
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(&(r, c)) {
            Some(slot) => {
                *slot += &v;
                if slot.is_zero() {
                    self.entries.remove(&(r, c));
                }
            }
            None => {
                self.entries.insert((r, c), v);
            }
        }
    }

    fn check_index(&self, r: usize, c: usize) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
    }

    /// Row-major iteration over nonzero entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Nonzero entries of one row, ascending by column.
    pub fn row_iter(&self, r: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries
            .range((Bound::Included((r, 0)), Bound::Excluded((r + 1, 0))))
            .map(|(&(_, c), v)| (c, v))
    }

    /// Column `c` as a dense vector.
    pub fn column(&self, c: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.clone());
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = -&*v;
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        if k.is_zero() {
            return Matrix::zero(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= k;
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        let mut out = self.clone();
        for (&(r, c), v) in &rhs.entries {
            out.add_to(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        let mut out = self.clone();
        for (&(r, c), v) in &rhs.entries {
            out.add_to(r, c, -v);
        }
        Ok(out)
    }

    fn same_shape(&self, rhs: &Matrix) -> Result<()> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension {
                context: "matrix sum rows",
                expected: self.rows,
                got: rhs.rows,
            });
        }
        if self.cols != rhs.cols {
            return Err(Error::Dimension {
                context: "matrix sum cols",
                expected: self.cols,
                got: rhs.cols,
            });
        }
        Ok(())
    }

    /// Sparse product `self · rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                context: "matrix product inner dimension",
                expected: self.cols,
                got: rhs.rows,
            });
        }
        // Walk the right factor once; scatter scaled rows of `self`'s
        // column structure. Accumulate per output cell, then normalize.
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        // Column access on `self` is slow; build a transposed index once.
        let mut by_col: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            by_col[c].push((r, v));
        }
        for (&(k, j), w) in &rhs.entries {
            for &(i, v) in &by_col[k] {
                let term = v * w;
                match acc.get_mut(&(i, j)) {
                    Some(slot) => *slot += term,
                    None => {
                        acc.insert((i, j), term);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Matrix {
            rows: self.rows,
            cols: rhs.cols,
            entries: acc,
        })
    }

    /// `self · v` for a dense vector `v`.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                context: "matrix-vector product",
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (&(r, c), w) in &self.entries {
            if !v[c].is_zero() {
                out[r] += w * &v[c];
            }
        }
        Ok(out)
    }

    /// Kronecker product: `(self ⊗ rhs)[(i·p + k, j·q + l)] = self[i,j] · rhs[k,l]`
    /// where `rhs` is `p × q`. Compatible with row-major flattening of
    /// tensor indices.
    pub fn kronecker(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.rows * rhs.rows, self.cols * rhs.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &rhs.entries {
                out.entries.insert((i * rhs.rows + k, j * rhs.cols + l), a * b);
            }
        }
        out
    }

    /// Copy `other` into `self` with its top-left corner at `(r0, c0)`.
    /// Existing entries in the target region are overwritten.
    pub fn embed(&mut self, other: &Matrix, r0: usize, c0: usize) {
        assert!(
            r0 + other.rows <= self.rows && c0 + other.cols <= self.cols,
            "embedded block out of bounds"
        );
        for (&(r, c), v) in &other.entries {
            self.entries.insert((r0 + r, c0 + c), v.clone());
        }
    }

    /// `[self | extra columns]`, one appended column per vector.
    pub fn augment_cols(&self, cols: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut out = Matrix::zero(self.rows, self.cols + cols.len());
        out.entries = self.entries.clone();
        for (k, col) in cols.iter().enumerate() {
            if col.len() != self.rows {
                return Err(Error::Dimension {
                    context: "augmented column length",
                    expected: self.rows,
                    got: col.len(),
                });
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    out.entries.insert((r, self.cols + k), v.clone());
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix, {} nonzero:", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.iter() {
            writeln!(f, "  ({r}, {c}) = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn no_stored_zeros() {
        let mut m = Matrix::zero(2, 2);
        m.set(0, 0, s(3));
        m.add_to(0, 0, s(-3));
        assert_eq!(m.nnz(), 0);
        m.set(1, 1, s(5));
        m.set(1, 1, s(0));
        assert_eq!(m.nnz(), 0);
        assert!(m.is_zero());
    }

    #[test]
    fn product_and_transpose() {
        let a = Matrix::from_rows(vec![vec![s(1), s(2)], vec![s(3), s(4)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(1), s(0)]]).unwrap();
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab, Matrix::from_rows(vec![vec![s(2), s(1)], vec![s(4), s(3)]]).unwrap());
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.matmul(&Matrix::zero(3, 3)).is_err());
    }

    #[test]
    fn kronecker_matches_flattening() {
        // (A ⊗ B)(e_j ⊗ e_l) = A e_j ⊗ B e_l under index (j, l) ↦ j·q + l.
        let a = Matrix::from_rows(vec![vec![s(1), s(2)], vec![s(0), s(1)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![s(3)], vec![s(4)]]).unwrap();
        let k = a.kronecker(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.cols(), 2);
        assert_eq!(k.get(0, 1), s(2) * s(3));
        assert_eq!(k.get(1, 1), s(2) * s(4));
        assert_eq!(k.get(3, 1), s(1) * s(4));
    }

    #[test]
    fn mul_vec_checks_len() {
        let a = Matrix::identity(3);
        assert!(a.mul_vec(&[s(1), s(2)]).is_err());
        assert_eq!(a.mul_vec(&[s(1), s(2), s(3)]).unwrap(), vec![s(1), s(2), s(3)]);
    }
}
