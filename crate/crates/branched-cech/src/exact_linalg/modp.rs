//! Ranks over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::SparseIntMatrix;

/// A dense matrix over the field with two elements, one bit per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    words: usize,
    data: Vec<Vec<u64>>,
}

impl BitMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self { cols, words, data: vec![vec![0; words]; rows] }
    }

    /// Reduction modulo two of an integer matrix.
    pub fn from_int(m: &SparseIntMatrix) -> Self {
        let mut b = Self::zeros(m.rows(), m.cols());
        for (r, c, v) in m.iter() {
            if v.is_odd() {
                b.flip(r, c);
            }
        }
        b
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.data.len()
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The entry at `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.cols, "column {c} out of range");
        (self.data[r][c / 64] >> (c % 64)) & 1 == 1
    }

    /// Toggles the entry at `(r, c)`.
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(c < self.cols, "column {c} out of range");
        self.data[r][c / 64] ^= 1 << (c % 64);
    }

    /// Sets the entry at `(r, c)`.
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if self.get(r, c) != v {
            self.flip(r, c);
        }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[w] & bit != 0 {
                    for k in w..self.words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// The matrix product over the two-element field.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows(), "shape mismatch in product");
        let mut out = BitMatrix::zeros(self.rows(), other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for k in 0..self.cols {
                if (row[k / 64] >> (k % 64)) & 1 == 1 {
                    for w in 0..out.words {
                        out.data[i][w] ^= other.data[k][w];
                    }
                }
            }
        }
        out
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&w| w == 0))
    }
}

/// Rank over the field with two elements.
pub fn rank_mod2(m: &SparseIntMatrix) -> usize {
    BitMatrix::from_int(m).rank()
}

/// Rank over the prime field with `p` elements.
///
/// For a large prime this equals the rational rank unless `p` divides one of
/// the invariant factors; it is used as a cheap independent cross-check.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    assert!(p >= 2, "modulus must be at least 2");
    let pb = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = vec![vec![0; m.cols()]; m.rows()];
    for (r, c, v) in m.iter() {
        let x = v.mod_floor(&pb);
        rows[r][c] = x.to_u64().expect("reduced value fits");
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        // Fermat inverse; p is assumed prime.
        let (mut base, mut e, mut acc) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = mulmod(*x, s);
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(pivot.iter()) {
                if *y != 0 {
                    *x = (*x + p - mulmod(f, *y)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rational rank computed modulo a fixed large prime.
pub fn rank_rational(m: &SparseIntMatrix) -> usize {
    rank_mod_p(m, 1_000_000_007)
}
