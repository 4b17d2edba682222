//! Smith normal form over the integers.
//!
//! Two entry points are provided. [`smith_normal_form`] works densely and
//! records the unimodular transforms, which callers need to read off
//! coordinates in a cokernel. [`invariant_factors`] works on sparse rows,
//! records nothing but the diagonal, and is the routine used for the large
//! Cech differentials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseIntMatrix;

type Dense = Vec<Vec<BigInt>>;

/// A Smith normal form `U * M * V = D` with its transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub invariant_factors: Vec<BigInt>,
    /// Unimodular row transform, `rows x rows`.
    pub u: Dense,
    /// Unimodular column transform, `cols x cols`.
    pub v: Dense,
    rows: usize,
    cols: usize,
}

impl SmithForm {
    /// The rank of the factored matrix.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Shape `(rows, cols)` of the factored matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// The diagonal matrix `D`, padded with zeros to the input shape.
    pub fn diagonal(&self) -> SparseIntMatrix {
        let mut d = SparseIntMatrix::zeros(self.rows, self.cols);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    /// Checks `U * M * V = D`, the divisibility chain and unimodularity of
    /// both transforms. Returns a description of the first violation.
    pub fn verify(&self, m: &SparseIntMatrix) -> std::result::Result<(), String> {
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err("shape differs from the factored matrix".into());
        }
        for w in self.invariant_factors.windows(2) {
            if !w[0].is_positive() || !(&w[1] % &w[0]).is_zero() {
                return Err(format!("divisibility chain broken at {} | {}", w[0], w[1]));
            }
        }
        if let Some(f) = self.invariant_factors.first() {
            if !f.is_positive() {
                return Err("nonpositive invariant factor".into());
            }
        }
        let u = SparseIntMatrix::from_dense_big(self.rows, &self.u).map_err(|e| e.to_string())?;
        let v = SparseIntMatrix::from_dense_big(self.cols, &self.v).map_err(|e| e.to_string())?;
        let prod = u.mul(m).and_then(|um| um.mul(&v)).map_err(|e| e.to_string())?;
        if prod != self.diagonal() {
            return Err("U*M*V differs from the diagonal form".into());
        }
        for (name, t) in [("U", &self.u), ("V", &self.v)] {
            let det = determinant(t);
            if det.abs() != BigInt::one() {
                return Err(format!("{name} has determinant {det}"));
            }
        }
        Ok(())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &Dense) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Row operation `row[dst] -= q * row[src]` on a dense array.
fn row_axpy(a: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Column operation `col[dst] -= q * col[src]` on a dense array.
fn col_axpy(a: &mut Dense, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(a: &mut Dense, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Dense Smith normal form with unimodular transforms.
///
/// The result satisfies `U * M * V = diag(d_1, ..., d_r, 0, ...)` with
/// `d_i | d_{i+1}`. In builds with debug assertions the factorization is
/// re-multiplied and checked before returning.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut factors = Vec::new();

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let i = (t..rows)
                    .filter(|&i| !a[i][t].is_zero())
                    .min_by(|&x, &y| a[x][t].abs().cmp(&a[y][t].abs()))
                    .expect("column has a nonzero entry");
                a.swap(t, i);
                u.swap(t, i);
                continue;
            }
            // Clear row t to the right of the pivot.
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let j = (t..cols)
                    .filter(|&j| !a[t][j].is_zero())
                    .min_by(|&x, &y| a[t][x].abs().cmp(&a[t][y].abs()))
                    .expect("row has a nonzero entry");
                swap_cols(&mut a, t, j);
                swap_cols(&mut v, t, j);
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        factors.push(a[t][t].clone());
    }

    let snf = SmithForm { invariant_factors: factors, u, v, rows, cols };
    if cfg!(debug_assertions) {
        if let Err(e) = snf.verify(m) {
            panic!("Smith normal form self-check failed: {e}");
        }
    }
    snf
}

/// Converts a list of nonzero diagonal entries into the invariant-factor
/// chain of the same diagonal matrix.
pub fn normalize_diagonal(diag: &[BigInt]) -> Vec<BigInt> {
    let mut units = 0usize;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in diag {
        let d = d.abs();
        assert!(!d.is_zero(), "diagonal entries must be nonzero");
        if d.is_one() {
            units += 1;
        } else {
            rest.push(d);
        }
    }
    rest.sort();
    let k = rest.len();
    for i in 0..k {
        for j in i + 1..k {
            if (&rest[j] % &rest[i]).is_zero() {
                continue;
            }
            let g = rest[i].gcd(&rest[j]);
            let l = rest[i].lcm(&rest[j]);
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); units];
    for d in rest {
        if d.is_one() {
            out.insert(0, d);
        } else {
            out.push(d);
        }
    }
    out
}

/// Invariant factors of a sparse matrix, computed without transforms.
///
/// Pivots are chosen by smallest absolute value with a sparsity tie-break,
/// which keeps fill-in small on the incidence-like matrices of the Cech
/// complexes.
pub fn invariant_factors(m: &SparseIntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = m.row_maps().into_iter().filter(|r| !r.is_empty()).collect();
    let mut diag = Vec::new();
    loop {
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            break;
        }
        // Column occupancy, for the sparsity tie-break.
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &rows {
            for &c in r.keys() {
                *col_count.entry(c).or_default() += 1;
            }
        }
        let mut best: Option<(BigInt, usize, usize, usize)> = None;
        'search: for (i, r) in rows.iter().enumerate() {
            for (&c, val) in r {
                let a = val.abs();
                let cost = (r.len() - 1) * (col_count[&c] - 1);
                let better = match &best {
                    None => true,
                    Some((ba, _, _, bc)) => a < *ba || (a == *ba && cost < *bc),
                };
                if better {
                    let done = a.is_one() && cost == 0;
                    best = Some((a, i, c, cost));
                    if done {
                        break 'search;
                    }
                }
            }
        }
        let (_, pi, pc, _) = best.expect("nonempty matrix has an entry");
        let piv_row = rows[pi].clone();
        let pv = piv_row[&pc].clone();

        // Row operations clearing column pc.
        for (i, r) in rows.iter_mut().enumerate() {
            if i == pi {
                continue;
            }
            let Some(x) = r.get(&pc) else { continue };
            let q = x.div_floor(&pv);
            if q.is_zero() {
                continue;
            }
            for (&c, y) in &piv_row {
                let e = r.entry(c).or_default();
                *e -= &q * y;
                if e.is_zero() {
                    r.remove(&c);
                }
            }
        }
        // Column operations clearing the pivot row.
        let piv_cols: Vec<(usize, BigInt)> =
            piv_row.iter().filter(|(&c, _)| c != pc).map(|(&c, v)| (c, v.clone())).collect();
        for (cc, x) in piv_cols {
            let q = x.div_floor(&pv);
            if q.is_zero() {
                continue;
            }
            for r in rows.iter_mut() {
                let Some(y) = r.get(&pc).cloned() else { continue };
                let e = r.entry(cc).or_default();
                *e -= &q * y;
                if e.is_zero() {
                    r.remove(&cc);
                }
            }
        }
        let isolated = rows[pi].len() == 1 && rows.iter().enumerate().all(|(i, r)| i == pi || !r.contains_key(&pc));
        if isolated {
            diag.push(pv.abs());
            rows.swap_remove(pi);
        }
    }
    normalize_diagonal(&diag)
}
