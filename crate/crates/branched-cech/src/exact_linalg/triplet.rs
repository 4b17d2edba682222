//! Line-based triplet format for exchanging integer matrices.
//!
//! ```text
//! # comment lines start with '#'
//! 3 4          <- rows cols
//! 0 0 2        <- row col value, zero-based
//! 2 3 -17
//! ```
//!
//! Values are arbitrary-precision integers. Blank lines and comments are
//! ignored anywhere. A repeated position is an error; explicit zeros are
//! accepted and not stored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;

use super::matrix::SparseIntMatrix;
use crate::error::{Error, Result};

/// Largest dimension accepted by the parser, to keep hostile headers from
/// requesting absurd shapes.
pub const MAX_DIM: usize = 1 << 24;

/// Parses a matrix from the triplet format.
pub fn parse_triplets(text: &str) -> Result<SparseIntMatrix> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("line {hl}: header must be 'rows cols'")));
    }
    let parse_dim = |s: &str| -> Result<usize> {
        let d: usize = s.parse().map_err(|_| Error::Parse(format!("line {hl}: bad dimension {s:?}")))?;
        if d > MAX_DIM {
            return Err(Error::Parse(format!("line {hl}: dimension {d} exceeds {MAX_DIM}")));
        }
        Ok(d)
    };
    let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let mut m = SparseIntMatrix::zeros(rows, cols);
    let mut seen = BTreeSet::new();
    for (ln, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("line {ln}: expected 'row col value'")));
        }
        let r: usize = f[0].parse().map_err(|_| Error::Parse(format!("line {ln}: bad row {:?}", f[0])))?;
        let c: usize = f[1].parse().map_err(|_| Error::Parse(format!("line {ln}: bad column {:?}", f[1])))?;
        let v: BigInt = f[2].parse().map_err(|_| Error::Parse(format!("line {ln}: bad value {:?}", f[2])))?;
        if r >= rows || c >= cols {
            return Err(Error::Parse(format!("line {ln}: position ({r},{c}) outside {rows}x{cols}")));
        }
        if !seen.insert((r, c)) {
            return Err(Error::Parse(format!("line {ln}: repeated position ({r},{c})")));
        }
        m.set(r, c, v);
    }
    Ok(m)
}

/// Serializes a matrix in the triplet format, entries in row-major order.
pub fn dump_triplets(m: &SparseIntMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for (r, c, v) in m.iter() {
        let _ = writeln!(s, "{r} {c} {v}");
    }
    s
}
