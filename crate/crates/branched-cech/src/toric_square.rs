//! Mod-2 square map on divisor classes of smooth toric Fano fourfolds.
//!
//! For an anticanonical hypersurface `X` in a smooth toric Fano fourfold
//! `Y`, the gap between the first mod-2 Betti number of the real
//! Lagrangian and `h^{1,1}(X)` is the kernel dimension of the square map
//! `D -> D^2`. Its rank equals the rank over `F_2` of the matrix
//! `S_ij = e_i^2 e_j (-K_Y)` for a basis `e_i` of the divisor classes.
//! Intersection numbers are computed from the fan by linear-equivalence
//! reduction.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{rank_mod2, SparseIntMatrix};
use crate::lattice::{count_antik_sections, det_i64, dot, solve_integer, LatticePoint4};

/// Largest number of rays accepted from JSON input.
pub const MAX_RAYS: usize = 64;
/// Largest number of maximal cones accepted from JSON input.
pub const MAX_CONES: usize = 4096;
/// Largest coordinate magnitude accepted from JSON input.
pub const MAX_COORD: i64 = 1 << 20;

/// A complete simplicial fan in `R^4` given by rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    rays: Vec<LatticePoint4>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanJson {
    rays: Vec<LatticePoint4>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds a fan from raw data without validating it. Cones are stored
    /// with sorted ray indices.
    pub fn new(rays: Vec<LatticePoint4>, max_cones: Vec<Vec<usize>>) -> Self {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Self { rays, max_cones }
    }

    /// Parses `{"rays": [[a,b,c,d], ...], "max_cones": [[i,j,k,l], ...]}`
    /// and validates the result.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: FanJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("fan JSON: {e}")))?;
        if parsed.rays.len() > MAX_RAYS {
            return Err(Error::Parse(format!("more than {MAX_RAYS} rays")));
        }
        if parsed.max_cones.len() > MAX_CONES {
            return Err(Error::Parse(format!("more than {MAX_CONES} maximal cones")));
        }
        if parsed.rays.iter().flatten().any(|x| x.abs() > MAX_COORD) {
            return Err(Error::Parse("coordinate magnitude exceeds 2^20".into()));
        }
        let fan = Self::new(parsed.rays, parsed.max_cones);
        fan.validate()?;
        Ok(fan)
    }

    /// Serializes to the JSON input form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fan serializes")
    }

    /// Rays.
    pub fn rays(&self) -> &[LatticePoint4] {
        &self.rays
    }

    /// Maximal cones as sorted ray-index lists.
    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// The fan of projective 4-space.
    pub fn projective4() -> Self {
        product(&[projective_space(4)])
    }

    /// The fan of the product of four projective lines.
    pub fn p1_fourfold() -> Self {
        let l = projective_space(1);
        product(&[l.clone(), l.clone(), l.clone(), l])
    }

    /// The fan of a projective line times projective 3-space.
    pub fn p1_times_p3() -> Self {
        product(&[projective_space(1), projective_space(3)])
    }

    /// The fan of the product of two projective planes.
    pub fn p2_times_p2() -> Self {
        product(&[projective_space(2), projective_space(2)])
    }

    /// Checks that the fan is smooth and complete.
    ///
    /// Rays must be distinct, nonzero and primitive, and every ray must lie
    /// in some cone. Every maximal cone has four distinct rays forming a
    /// lattice basis. Every wall of a maximal cone is shared by exactly two
    /// cones lying on opposite sides of it, and a generic point lies in
    /// exactly one cone.
    pub fn validate(&self) -> Result<()> {
        let n = self.rays.len();
        if n < 5 {
            return Err(Error::InvalidFan(format!("{n} rays cannot span a complete fan in R^4")));
        }
        for (i, v) in self.rays.iter().enumerate() {
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g != 1 {
                return Err(Error::InvalidFan(format!("ray {i} {v:?} is not primitive")));
            }
            if self.rays[..i].contains(v) {
                return Err(Error::InvalidFan(format!("ray {i} {v:?} is repeated")));
            }
        }
        let mut seen = BTreeSet::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            if c.len() != 4 || c.windows(2).any(|w| w[0] == w[1]) || c.iter().any(|&r| r >= n) {
                return Err(Error::InvalidFan(format!("cone {ci} must have four distinct valid rays")));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidFan(format!("cone {ci} is repeated")));
            }
            let det = det_i64(&self.cone_rows(c));
            if det.abs() != 1 {
                return Err(Error::NotSmooth { cone: ci, det });
            }
        }
        if let Some(r) = (0..n).find(|r| !self.max_cones.iter().any(|c| c.contains(r))) {
            return Err(Error::InvalidFan(format!("ray {r} lies in no maximal cone")));
        }
        let mut walls: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            for skip in 0..4 {
                let wall: Vec<usize> = c.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &r)| r).collect();
                walls.entry(wall).or_default().push((ci, c[skip]));
            }
        }
        for (wall, sides) in &walls {
            if sides.len() != 2 {
                return Err(Error::NotComplete(format!(
                    "wall {wall:?} bounds {} maximal cones instead of two",
                    sides.len()
                )));
            }
            let side = |apex: usize| {
                let mut rows: Vec<Vec<i64>> = wall.iter().map(|&r| self.rays[r].to_vec()).collect();
                rows.push(self.rays[apex].to_vec());
                det_i64(&rows).signum()
            };
            if side(sides[0].1) == side(sides[1].1) {
                return Err(Error::NotComplete(format!("the two cones on wall {wall:?} overlap")));
            }
        }
        let w = self.generic_point(&walls)?;
        let covering = self.max_cones.iter().filter(|c| self.interior_contains(c, &w)).count();
        if covering != 1 {
            return Err(Error::NotComplete(format!("a generic point lies in {covering} maximal cones")));
        }
        Ok(())
    }

    fn cone_rows(&self, c: &[usize]) -> Vec<Vec<i64>> {
        c.iter().map(|&r| self.rays[r].to_vec()).collect()
    }

    fn generic_point(&self, walls: &BTreeMap<Vec<usize>, Vec<(usize, usize)>>) -> Result<LatticePoint4> {
        for s in 0..64i64 {
            let w = [1009 + s, 7 * s - 2003, 3001 - 11 * s, 13 * s + 4999];
            let on_wall = walls.keys().any(|wall| {
                let mut rows: Vec<Vec<i64>> = wall.iter().map(|&r| self.rays[r].to_vec()).collect();
                rows.push(w.to_vec());
                det_i64(&rows) == 0
            });
            if !on_wall {
                return Ok(w);
            }
        }
        Err(Error::InvalidFan("no generic point found off the walls".into()))
    }

    /// True when `w` is a positive combination of the cone's rays.
    fn interior_contains(&self, c: &[usize], w: &LatticePoint4) -> bool {
        // The cone is unimodular, so w = sum l_i v_i with integer l_i, which
        // are the values of the dual basis on w.
        (0..4).all(|i| dot(&self.dual_vector(c, i), w) > 0)
    }

    /// The character `m` with `<m, v_{c_j}> = delta_ij` for a unimodular
    /// cone or basis `c`.
    fn dual_vector(&self, c: &[usize], i: usize) -> LatticePoint4 {
        let mut e = [0i64; 4];
        e[i] = 1;
        let m = solve_integer(&self.cone_rows(c), &e).expect("unimodular basis has an integral dual");
        [m[0], m[1], m[2], m[3]]
    }

    fn cone_containing(&self, set: &BTreeSet<usize>) -> Option<&Vec<usize>> {
        self.max_cones.iter().find(|c| set.iter().all(|r| c.contains(r)))
    }

    /// The anticanonical coefficients, all equal to one.
    pub fn anticanonical(&self) -> Vec<i64> {
        vec![1; self.rays.len()]
    }
}

/// Rays and maximal cones of one factor of a product fan.
type FanData = (Vec<Vec<i64>>, Vec<Vec<usize>>);

fn projective_space(n: usize) -> FanData {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let cones = crate::lattice::combinations(n + 1, n);
    (rays, cones)
}

fn product(factors: &[FanData]) -> Fan {
    let dim: usize = factors.iter().map(|f| f.0[0].len()).sum();
    assert_eq!(dim, 4, "product fans must live in R^4");
    let mut rays = Vec::new();
    let mut offsets = Vec::new();
    let mut shift = 0;
    for (fr, _) in factors {
        offsets.push(rays.len());
        for r in fr {
            let mut v = [0i64; 4];
            v[shift..shift + r.len()].copy_from_slice(r);
            rays.push(v);
        }
        shift += fr[0].len();
    }
    let mut cones: Vec<Vec<usize>> = vec![Vec::new()];
    for (k, (_, fc)) in factors.iter().enumerate() {
        let off = offsets[k];
        cones = cones
            .into_iter()
            .flat_map(|c| {
                fc.iter().map(move |d| {
                    let mut e = c.clone();
                    e.extend(d.iter().map(|&r| r + off));
                    e
                })
            })
            .collect();
    }
    Fan::new(rays, cones)
}

/// Intersection number of four toric boundary divisors, given by ray
/// indices with repetition, on a validated smooth complete fan.
///
/// Repeated factors are removed one at a time: the leftmost repeated ray
/// `r` lies in a maximal cone containing all distinct factors, and is
/// replaced by `-sum <m, v_rho> D_rho` over rays outside that cone, where
/// `m` is dual to `v_r` in the cone. Distinct factors give one when they
/// span a maximal cone and zero otherwise.
pub fn intersection_number(fan: &Fan, divisors: [usize; 4]) -> i64 {
    let mut cache = BTreeMap::new();
    intersect_cached(fan, divisors, &mut cache)
}

fn intersect_cached(fan: &Fan, divisors: [usize; 4], cache: &mut BTreeMap<[usize; 4], i64>) -> i64 {
    let mut key = divisors;
    key.sort_unstable();
    if let Some(&v) = cache.get(&key) {
        return v;
    }
    let distinct: BTreeSet<usize> = key.iter().copied().collect();
    let value = match fan.cone_containing(&distinct) {
        None => 0,
        Some(_) if distinct.len() == 4 => 1,
        Some(cone) => {
            let r = (0..3).find(|&i| key[i] == key[i + 1]).map(|i| key[i]).expect("a repeated factor");
            let pos = cone.iter().position(|&x| x == r).expect("cone holds the factor");
            let m = fan.dual_vector(cone, pos);
            let mut rest = key;
            let slot = rest.iter().position(|&x| x == r).expect("factor present");
            let mut total = 0;
            for rho in 0..fan.rays.len() {
                if cone.contains(&rho) {
                    continue;
                }
                let c = dot(&m, &fan.rays[rho]);
                if c != 0 {
                    rest[slot] = rho;
                    total -= c * intersect_cached(fan, rest, cache);
                }
            }
            total
        }
    };
    cache.insert(key, value);
    value
}

/// Intersection number of four divisors given as integer combinations of
/// the boundary divisors, by multilinear expansion.
pub fn intersect_divisors(fan: &Fan, d: [&[i64]; 4], cache: &mut BTreeMap<[usize; 4], i64>) -> i64 {
    let support = |v: &[i64]| -> Vec<(usize, i64)> {
        v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
    };
    let (a, b, c, e) = (support(d[0]), support(d[1]), support(d[2]), support(d[3]));
    let mut total = 0;
    for &(i, x) in &a {
        for &(j, y) in &b {
            for &(k, z) in &c {
                for &(l, w) in &e {
                    total += x * y * z * w * intersect_cached(fan, [i, j, k, l], cache);
                }
            }
        }
    }
    total
}

/// A basis of the divisor class group: the boundary divisors outside a
/// lattice basis of rays that is eliminated by linear equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorBasis {
    /// Ray indices of the eliminated lattice basis.
    pub eliminated: Vec<usize>,
    /// Basis divisors as coefficient vectors over all rays.
    pub divisors: Vec<Vec<i64>>,
}

/// The default divisor basis: the last four rays are eliminated when they
/// form a lattice basis, otherwise the lexicographically last maximal cone.
pub fn default_basis(fan: &Fan) -> DivisorBasis {
    let n = fan.rays.len();
    let last: Vec<usize> = (n - 4..n).collect();
    let eliminated = if det_i64(&fan.cone_rows(&last)).abs() == 1 {
        last
    } else {
        fan.max_cones.iter().max().expect("a valid fan has cones").clone()
    };
    let divisors =
        (0..n).filter(|r| !eliminated.contains(r)).map(|r| (0..n).map(|s| i64::from(s == r)).collect()).collect();
    DivisorBasis { eliminated, divisors }
}

/// The matrix `S_ij = e_i^2 e_j (-K)` over the integers for a divisor basis.
pub fn square_matrix(fan: &Fan, basis: &DivisorBasis) -> Vec<Vec<i64>> {
    let k = basis.divisors.len();
    let antik = fan.anticanonical();
    let mut cache = BTreeMap::new();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let e = &basis.divisors;
                    intersect_divisors(fan, [&e[i], &e[i], &e[j], &antik], &mut cache)
                })
                .collect()
        })
        .collect()
}

/// Rank over `F_2` of an integer matrix.
fn rank_mod2_dense(s: &[Vec<i64>]) -> usize {
    if s.is_empty() {
        return 0;
    }
    let m = SparseIntMatrix::from_dense(s[0].len(), s).expect("rectangular matrix");
    rank_mod2(&m)
}

/// Result of the square-map computation for one fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    /// Rank of the divisor class group, `#rays - 4`.
    pub h11: usize,
    /// Lattice points of the anticanonical section polytope.
    pub h0_antik: u64,
    /// Rank over `F_2` of the square matrix.
    pub rank_square: usize,
    /// Kernel dimension of the square matrix.
    pub d: usize,
    /// First mod-2 Betti number of the real Lagrangian, `h11 + d`.
    pub h1_lagrangian: usize,
}

impl SquareReport {
    /// The tuple `(h11, h0, rank, d)` in table order.
    pub fn tuple(&self) -> (usize, u64, usize, usize) {
        (self.h11, self.h0_antik, self.rank_square, self.d)
    }
}

/// Computes the square-map report of a smooth complete fan.
pub fn square_report(fan: &Fan) -> Result<SquareReport> {
    fan.validate()?;
    let basis = default_basis(fan);
    let s = square_matrix(fan, &basis);
    let h11 = basis.divisors.len();
    let rank_square = rank_mod2_dense(&s);
    let d = h11 - rank_square;
    Ok(SquareReport { h11, h0_antik: count_antik_sections(fan)?, rank_square, d, h1_lagrangian: h11 + d })
}

/// Rank of the square matrix after a random unimodular change of the
/// divisor basis, recomputed from intersection numbers.
pub fn square_rank_in_random_basis<R: Rng>(fan: &Fan, rng: &mut R) -> usize {
    let base = default_basis(fan);
    let k = base.divisors.len();
    let mut a: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * k {
        let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if i != j {
            let c = rng.gen_range(-2..=2);
            let row_j = a[j].clone();
            for (x, y) in a[i].iter_mut().zip(row_j) {
                *x += c * y;
            }
        }
        if k > 1 && rng.gen_bool(0.3) {
            a.swap(i, (i + 1) % k);
        }
    }
    let n = fan.rays.len();
    let divisors: Vec<Vec<i64>> = a
        .iter()
        .map(|row| (0..n).map(|s| row.iter().zip(&base.divisors).map(|(c, e)| c * e[s]).sum()).collect())
        .collect();
    let basis = DivisorBasis { eliminated: base.eliminated, divisors };
    rank_mod2_dense(&square_matrix(fan, &basis))
}

/// One row of the published table of smooth toric Fano fourfolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    /// Index in the graded rings database.
    pub id: u32,
    /// `h^{1,1}` of the hypersurface.
    pub h11: u32,
    /// Sections of the anticanonical bundle.
    pub h0: u32,
    /// Rank of the square map.
    pub rank: u32,
    /// Kernel dimension of the square map.
    pub d: u32,
}

/// The 124 rows of the table, ordered by id.
pub fn fano_table() -> Vec<TableRow> {
    TABLE_ROWS.iter().map(|&[id, h11, h0, rank, d]| TableRow { id, h11, h0, rank, d }).collect()
}

/// Outcome of matching a computed report against the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "ids", rename_all = "lowercase")]
pub enum TableMatch {
    /// Exactly one row carries the computed tuple.
    Consistent(u32),
    /// Several rows carry the computed tuple.
    Ambiguous(Vec<u32>),
    /// No row carries the computed tuple.
    Inconsistent,
}

/// Matches a report against the table by its `(h11, h0, rank, d)` tuple.
pub fn match_table(report: &SquareReport) -> TableMatch {
    let ids: Vec<u32> = fano_table()
        .into_iter()
        .filter(|r| (r.h11 as usize, u64::from(r.h0), r.rank as usize, r.d as usize) == report.tuple())
        .map(|r| r.id)
        .collect();
    match ids.as_slice() {
        [] => TableMatch::Inconsistent,
        [id] => TableMatch::Consistent(*id),
        _ => TableMatch::Ambiguous(ids),
    }
}

const TABLE_ROWS: [[u32; 5]; 124] = [
    [1, 3, 123, 2, 1],
    [2, 2, 159, 2, 0],
    [3, 4, 114, 2, 2],
    [4, 5, 78, 2, 3],
    [5, 4, 99, 2, 2],
    [6, 4, 96, 3, 1],
    [7, 3, 120, 2, 1],
    [8, 3, 117, 2, 1],
    [9, 4, 81, 2, 2],
    [10, 4, 102, 0, 4],
    [11, 4, 87, 2, 2],
    [12, 3, 114, 0, 3],
    [13, 4, 78, 4, 0],
    [14, 4, 84, 0, 4],
    [15, 4, 90, 3, 1],
    [16, 4, 72, 3, 1],
    [17, 3, 93, 3, 0],
    [18, 3, 108, 3, 0],
    [19, 3, 102, 0, 3],
    [20, 3, 84, 2, 1],
    [21, 2, 120, 2, 0],
    [22, 4, 104, 2, 2],
    [23, 5, 76, 4, 1],
    [24, 4, 92, 4, 0],
    [25, 4, 86, 4, 0],
    [26, 3, 114, 2, 1],
    [27, 4, 87, 3, 1],
    [28, 5, 69, 5, 0],
    [29, 5, 67, 2, 3],
    [30, 4, 70, 4, 0],
    [31, 5, 55, 3, 2],
    [32, 4, 69, 3, 1],
    [33, 5, 66, 3, 2],
    [34, 4, 78, 3, 1],
    [35, 4, 78, 3, 1],
    [36, 4, 81, 2, 2],
    [37, 3, 87, 2, 1],
    [38, 4, 81, 1, 3],
    [39, 5, 66, 5, 0],
    [40, 6, 51, 2, 4],
    [41, 3, 90, 3, 0],
    [42, 4, 70, 4, 0],
    [43, 3, 96, 2, 1],
    [44, 4, 75, 4, 0],
    [45, 3, 90, 2, 1],
    [46, 3, 85, 3, 0],
    [47, 2, 105, 2, 0],
    [48, 5, 92, 0, 5],
    [49, 6, 67, 0, 6],
    [50, 5, 83, 0, 5],
    [51, 4, 99, 0, 4],
    [52, 4, 96, 0, 4],
    [53, 5, 71, 0, 5],
    [54, 5, 85, 3, 2],
    [55, 6, 65, 4, 2],
    [56, 5, 85, 4, 1],
    [57, 6, 65, 4, 2],
    [58, 5, 79, 2, 3],
    [59, 5, 73, 3, 2],
    [60, 4, 93, 2, 2],
    [61, 5, 78, 0, 5],
    [62, 6, 63, 0, 6],
    [63, 6, 61, 4, 2],
    [64, 6, 59, 0, 6],
    [65, 5, 71, 3, 2],
    [66, 5, 71, 5, 0],
    [67, 5, 75, 0, 5],
    [68, 5, 77, 3, 2],
    [69, 5, 67, 0, 5],
    [70, 4, 86, 3, 1],
    [71, 4, 82, 0, 4],
    [72, 4, 87, 0, 4],
    [73, 4, 75, 0, 4],
    [74, 3, 100, 0, 3],
    [75, 6, 64, 2, 4],
    [76, 7, 56, 2, 5],
    [77, 8, 49, 2, 6],
    [78, 6, 63, 2, 4],
    [79, 5, 72, 2, 3],
    [80, 5, 70, 2, 3],
    [81, 4, 76, 2, 2],
    [82, 4, 90, 2, 2],
    [83, 4, 81, 2, 2],
    [84, 5, 65, 3, 2],
    [85, 4, 75, 2, 2],
    [86, 3, 85, 1, 2],
    [87, 4, 77, 3, 1],
    [88, 4, 82, 3, 1],
    [89, 4, 84, 0, 4],
    [90, 5, 69, 0, 5],
    [91, 4, 81, 2, 2],
    [92, 4, 81, 4, 0],
    [93, 4, 74, 3, 1],
    [94, 3, 95, 2, 1],
    [95, 4, 93, 4, 0],
    [96, 5, 72, 4, 1],
    [97, 5, 72, 0, 5],
    [98, 6, 63, 0, 6],
    [99, 5, 70, 2, 3],
    [100, 4, 87, 2, 2],
    [101, 4, 80, 2, 2],
    [102, 4, 78, 2, 2],
    [103, 4, 78, 0, 4],
    [104, 3, 90, 2, 1],
    [105, 3, 101, 2, 1],
    [106, 3, 102, 2, 1],
    [107, 4, 81, 0, 4],
    [108, 4, 75, 0, 4],
    [109, 3, 96, 2, 1],
    [110, 3, 90, 0, 3],
    [111, 3, 99, 2, 1],
    [112, 3, 90, 2, 1],
    [113, 3, 84, 2, 1],
    [114, 3, 84, 3, 0],
    [115, 2, 105, 1, 1],
    [116, 2, 129, 0, 2],
    [117, 3, 93, 0, 3],
    [118, 2, 105, 2, 0],
    [119, 4, 81, 0, 4],
    [120, 3, 90, 0, 3],
    [121, 2, 111, 2, 0],
    [122, 2, 105, 0, 2],
    [123, 2, 100, 2, 0],
    [124, 1, 126, 1, 0],
];
