//! Finitely generated abelian groups and cohomology of integer complexes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::matrix::SparseIntMatrix;
use super::modp::rank_mod2;
use super::snf::invariant_factors;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k`.
///
/// Torsion factors are at least two and form a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    /// Rank of the free part.
    pub free_rank: usize,
    /// Torsion invariant factors, each at least two, `d_i | d_{i+1}`.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// The trivial group.
    pub fn trivial() -> Self {
        Self::default()
    }

    /// The free group of rank `n`.
    pub fn free(n: usize) -> Self {
        Self { free_rank: n, torsion: Vec::new() }
    }

    /// Builds a group from a free rank and an arbitrary list of cyclic
    /// orders; entries equal to one are dropped and the rest are brought
    /// into invariant-factor form.
    pub fn new(free_rank: usize, cyclic: &[u64]) -> Self {
        let big: Vec<BigInt> = cyclic.iter().filter(|&&d| d != 1).map(|&d| BigInt::from(d)).collect();
        assert!(big.iter().all(|d| d > &BigInt::from(0u8)), "cyclic orders must be positive");
        Self::from_diagonal(free_rank, &big)
    }

    /// Builds a group from a free rank and the nonzero diagonal entries of
    /// any diagonal presentation of its torsion.
    pub fn from_diagonal(free_rank: usize, diag: &[BigInt]) -> Self {
        let torsion = super::snf::normalize_diagonal(diag).into_iter().filter(|d| !d.is_one()).collect();
        Self { free_rank, torsion }
    }

    /// The cokernel of an integer matrix, viewed as a map `Z^cols -> Z^rows`.
    pub fn cokernel(m: &SparseIntMatrix) -> Self {
        let f = invariant_factors(m);
        Self::from_diagonal(m.rows() - f.len(), &f)
    }

    /// The group presented by generators (columns) and relations (rows).
    pub fn presented(relations: &SparseIntMatrix) -> Self {
        Self::cokernel(&relations.transpose())
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        Self::from_diagonal(self.free_rank + other.free_rank, &t)
    }

    /// True for the trivial group.
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// True when the group is finite.
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of invariant factors divisible by two.
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|d| d.is_even()).count()
    }

    /// Dimension of the group tensored with the two-element field.
    pub fn dim_mod2(&self) -> usize {
        self.free_rank + self.even_torsion_count()
    }

    /// True when every torsion factor is a power of two.
    pub fn is_two_primary_torsion(&self) -> bool {
        self.torsion.iter().all(|d| {
            let mut x = d.clone();
            while x.is_even() {
                x /= 2;
            }
            x.is_one()
        })
    }

    /// Largest torsion factor, or one when there is none.
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Multiset of elementary divisor orders, for compact comparisons.
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }

    /// The first cohomology `Hom(G, Z)` of a space with `H_1 = G`.
    pub fn hom_to_z(&self) -> Self {
        Self::free(self.free_rank)
    }

    /// The torsion subgroup, which is `Ext(G, Z)`.
    pub fn ext_to_z(&self) -> Self {
        Self { free_rank: 0, torsion: self.torsion.clone() }
    }
}

impl fmt::Display for AbelianGroup {
    /// Renders as `Z^28 + Z/2^20`; the trivial group renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            let count = j - i;
            if count == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("Z/{d}^{count}"));
            }
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AbelianGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// Cohomology `ker(d_out) / im(d_in)` at the middle term of
/// `A --d_in--> B --d_out--> C`.
///
/// Matrices act on column vectors: `d_in` has `dim B` rows. Either map may be
/// absent at the ends of a complex; pass a matrix with zero rows or columns.
pub fn cohomology_at(d_in: &SparseIntMatrix, d_out: &SparseIntMatrix) -> Result<AbelianGroup> {
    let n = d_in.rows();
    if d_out.cols() != n {
        return Err(Error::Shape(format!("d_in lands in rank {n} but d_out starts from rank {}", d_out.cols())));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex("d_out * d_in is nonzero".into()));
    }
    let f_in = invariant_factors(d_in);
    let rank_out = invariant_factors(d_out).len();
    Ok(AbelianGroup::from_diagonal(n - f_in.len() - rank_out, &f_in))
}

/// Dimension of the cohomology over the two-element field at the middle
/// term of `A --d_in--> B --d_out--> C`.
pub fn cohomology_dim_mod2(d_in: &SparseIntMatrix, d_out: &SparseIntMatrix) -> Result<usize> {
    let n = d_in.rows();
    if d_out.cols() != n {
        return Err(Error::Shape("incompatible differentials".into()));
    }
    let prod = super::modp::BitMatrix::from_int(d_out).mul(&super::modp::BitMatrix::from_int(d_in));
    if !prod.is_zero() {
        return Err(Error::NotAComplex("d_out * d_in is nonzero mod 2".into()));
    }
    Ok(n - rank_mod2(d_in) - rank_mod2(d_out))
}
