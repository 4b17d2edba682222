//! Sparse integer matrices with arbitrary-precision entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A sparse matrix over the integers.
///
/// Entries are stored in a map keyed by `(row, col)`; zero entries are never
/// stored, so two matrices with the same shape compare equal exactly when
/// they represent the same linear map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    /// Builds a matrix from dense rows of machine integers.
    ///
    /// Every row must have length `cols`.
    pub fn from_dense(cols: usize, data: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(data.len(), cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {r} has length {}, expected {cols}", row.len())));
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.entries.insert((r, c), BigInt::from(v));
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from sparse rows given as column-to-value maps.
    pub fn from_row_maps(cols: usize, data: &[BTreeMap<usize, BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(data.len(), cols);
        for (r, row) in data.iter().enumerate() {
            for (&c, v) in row {
                if c >= cols {
                    return Err(Error::Shape(format!("column {c} out of range {cols}")));
                }
                m.add_to(r, c, v.clone());
            }
        }
        Ok(m)
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry at `(r, c)`.
    ///
    /// # Panics
    /// Panics when the position is outside the matrix.
    pub fn get(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    /// Overwrites the entry at `(r, c)`.
    ///
    /// # Panics
    /// Panics when the position is outside the matrix.
    pub fn set(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let v = v.into();
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds `v` to the entry at `(r, c)`.
    ///
    /// # Panics
    /// Panics when the position is outside the matrix.
    pub fn add_to(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let v = v.into();
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_default();
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// Iterates over the nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// The transpose.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    /// The matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let other_rows = other.row_maps();
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for (&c, b) in &other_rows[k] {
                out.add_to(r, c, a * b);
            }
        }
        Ok(out)
    }

    /// Rows as column-to-value maps.
    pub fn row_maps(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    /// Dense copy of the matrix.
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    /// Builds a sparse matrix from a dense big-integer array.
    pub fn from_dense_big(cols: usize, data: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(data.len(), cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {r} has length {}, expected {cols}", row.len())));
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((r, c), v.clone());
                }
            }
        }
        Ok(m)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut y = vec![BigInt::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            y[r] += v * &x[c];
        }
        Ok(y)
    }
}
