//! Kernels of relation matrices with coordinate maps.
//!
//! For a relation matrix `R` (relations by generators) the first cohomology
//! of the presented space is the kernel of `R` acting on functionals. We
//! reduce `R` by unimodular column operations, tracking the accumulated
//! transform `V` and its inverse, so that kernel vectors can be expressed in
//! the computed basis exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseIntMatrix;
use crate::error::{Error, Result};

/// Coefficient ring for a kernel computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Ring {
    /// The integers.
    Z,
    /// The field with two elements.
    Z2,
}

impl Ring {
    fn modulus(self) -> Option<BigInt> {
        match self {
            Ring::Z => None,
            Ring::Z2 => Some(BigInt::from(2u8)),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Z => write!(f, "z"),
            Ring::Z2 => write!(f, "z2"),
        }
    }
}

/// A basis of `{x : R x = 0}` with inverse coordinates.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    ring: Ring,
    n: usize,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    free: Vec<usize>,
}

impl KernelBasis {
    /// Computes the kernel of `relations` (acting on column vectors of
    /// length `relations.cols()`) over the given ring.
    pub fn new(relations: &SparseIntMatrix, ring: Ring) -> Self {
        let n = relations.cols();
        let modulus = ring.modulus();
        let norm = |x: BigInt| match &modulus {
            Some(m) => x.mod_floor(m),
            None => x,
        };
        let mut r: Vec<Vec<BigInt>> =
            relations.to_dense().into_iter().map(|row| row.into_iter().map(&norm).collect()).collect();
        let mut v = unit_matrix(n);
        let mut vi = unit_matrix(n);
        let mut free: Vec<usize> = (0..n).collect();

        // col[dst] += k * col[src] on R and V; row[src] -= k * row[dst] on V^-1.
        let colop = |r: &mut Vec<Vec<BigInt>>,
                     v: &mut Vec<Vec<BigInt>>,
                     vi: &mut Vec<Vec<BigInt>>,
                     dst: usize,
                     src: usize,
                     k: &BigInt| {
            if k.is_zero() {
                return;
            }
            for row in r.iter_mut().chain(v.iter_mut()) {
                if !row[src].is_zero() {
                    let t = norm(&row[dst] + k * &row[src]);
                    row[dst] = t;
                }
            }
            let d = vi[dst].clone();
            for (x, y) in vi[src].iter_mut().zip(d.iter()) {
                if !y.is_zero() {
                    *x = norm(&*x - k * y);
                }
            }
        };

        for ri in 0..r.len() {
            loop {
                let nz: Vec<usize> = free.iter().copied().filter(|&c| !r[ri][c].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                if let Some(m) = &modulus {
                    let p = nz[0];
                    let inv = mod_inverse(&r[ri][p], m);
                    for &c in &nz[1..] {
                        let k = norm(-&r[ri][c] * &inv);
                        colop(&mut r, &mut v, &mut vi, c, p, &k);
                    }
                    free.retain(|&c| c != p);
                    break;
                }
                let p = *nz.iter().min_by(|&&a, &&b| r[ri][a].abs().cmp(&r[ri][b].abs())).expect("nonempty");
                if nz.len() == 1 {
                    free.retain(|&c| c != p);
                    break;
                }
                let pv = r[ri][p].clone();
                for &c in &nz {
                    if c != p {
                        let k = -r[ri][c].div_floor(&pv);
                        colop(&mut r, &mut v, &mut vi, c, p, &k);
                    }
                }
            }
        }
        debug_assert!(r.iter().all(|row| free.iter().all(|&c| row[c].is_zero())));
        Self { ring, n, v, v_inv: vi, free }
    }

    /// The coefficient ring.
    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Number of generators the relations act on.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Dimension (rank) of the kernel.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// The `j`-th basis vector of the kernel.
    pub fn basis_vector(&self, j: usize) -> Vec<BigInt> {
        let c = self.free[j];
        (0..self.n).map(|i| self.v[i][c].clone()).collect()
    }

    /// Coordinates of a kernel vector in the computed basis.
    ///
    /// Fails when `x` does not lie in the kernel, which is detected by
    /// reconstructing `x` from the coordinates.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.n {
            return Err(Error::Shape(format!("vector of length {} for {} generators", x.len(), self.n)));
        }
        let modulus = self.ring.modulus();
        let norm = |y: BigInt| match &modulus {
            Some(m) => y.mod_floor(m),
            None => y,
        };
        let coords: Vec<BigInt> =
            self.free.iter().map(|&c| norm(self.v_inv[c].iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>())).collect();
        for (i, xi) in x.iter().enumerate().take(self.n) {
            let back: BigInt = self.free.iter().zip(&coords).map(|(&c, k)| &self.v[i][c] * k).sum();
            if norm(back) != norm(xi.clone()) {
                return Err(Error::NotInKernel(format!("coordinate {i} does not reconstruct")));
            }
        }
        Ok(coords)
    }
}

fn unit_matrix(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {m}");
    e.x.mod_floor(m)
}
