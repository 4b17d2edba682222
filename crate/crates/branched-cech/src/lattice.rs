//! Lattice polytopes in four dimensions: facets, face lattice, lattice
//! points, and the Batyrev Hodge-number formula for reflexive polytopes.
//!
//! Polytopes here are tiny, so facets are found by brute force over
//! supporting hyperplanes through affinely independent vertex subsets, and
//! lattice points are enumerated by scanning the bounding box.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric_square::Fan;

/// A point of the lattice `Z^4`.
pub type LatticePoint4 = [i64; 4];

/// Maximal number of vertices accepted from external input.
pub const MAX_VERTICES: usize = 64;

/// Maximal bounding-box volume scanned by the fallible enumerators.
pub const MAX_BOX_VOLUME: u128 = 200_000_000;

/// Inner product of two lattice vectors.
pub fn dot(a: &LatticePoint4, b: &LatticePoint4) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A supporting hyperplane `<normal, x> >= offset` cutting out a facet.
///
/// The normal is primitive and lies in the linear span of the polytope's
/// edge directions, which makes it unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Primitive inner normal.
    pub normal: LatticePoint4,
    /// Right-hand side of the inequality.
    pub offset: i64,
    /// Indices of the vertices lying on the facet, sorted.
    pub vertex_ids: Vec<usize>,
}

/// A lattice polytope given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    vertices: Vec<LatticePoint4>,
    dim: usize,
    hull_equations: Vec<(LatticePoint4, i64)>,
    facets: Vec<Facet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeJson {
    vertices: Vec<LatticePoint4>,
}

impl LatticePolytope {
    /// Builds a polytope from its vertex list.
    ///
    /// The list must be nonempty, free of repetitions and consist exactly of
    /// extreme points of its convex hull.
    pub fn new(vertices: Vec<LatticePoint4>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Parse("a polytope needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(*v) {
                return Err(Error::RedundantVertex(*v));
            }
        }
        let p = Self::hull_data(vertices);
        for (i, v) in p.vertices.iter().enumerate() {
            if !p.is_extreme(i) {
                return Err(Error::RedundantVertex(*v));
            }
        }
        Ok(p)
    }

    /// The convex hull of an arbitrary nonempty point set; non-extreme
    /// points and repetitions are discarded.
    pub fn hull_of(points: &[LatticePoint4]) -> Result<Self> {
        let pts: Vec<LatticePoint4> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return Err(Error::Parse("a polytope needs at least one vertex".into()));
        }
        let p = Self::hull_data(pts);
        let keep: Vec<LatticePoint4> =
            (0..p.vertices.len()).filter(|&i| p.is_extreme(i)).map(|i| p.vertices[i]).collect();
        Ok(Self::hull_data(keep))
    }

    /// Parses the JSON form `{"vertices": [[a,b,c,d], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: PolytopeJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("polytope JSON: {e}")))?;
        if parsed.vertices.len() > MAX_VERTICES {
            return Err(Error::Parse(format!("more than {MAX_VERTICES} vertices")));
        }
        if parsed.vertices.iter().flatten().any(|x| x.abs() > 1 << 20) {
            return Err(Error::Parse("coordinate magnitude exceeds 2^20".into()));
        }
        Self::new(parsed.vertices)
    }

    /// The quintic simplex: the convex hull of `(-1,-1,-1,-1)` and the four
    /// points `-1 + 5 e_k`.
    pub fn quintic() -> Self {
        let mut v = vec![[-1; 4]];
        for k in 0..4 {
            let mut p = [-1; 4];
            p[k] = 4;
            v.push(p);
        }
        Self::new(v).expect("the quintic simplex is valid")
    }

    /// The standard unit simplex `conv{0, e_1, ..., e_4}`.
    pub fn unit_simplex() -> Self {
        let mut v = vec![[0; 4]];
        for k in 0..4 {
            let mut p = [0; 4];
            p[k] = 1;
            v.push(p);
        }
        Self::new(v).expect("the unit simplex is valid")
    }

    /// The cross-polytope `conv{+-e_1, ..., +-e_4}`.
    pub fn cross_polytope() -> Self {
        let mut v = Vec::new();
        for k in 0..4 {
            for s in [1, -1] {
                let mut p = [0; 4];
                p[k] = s;
                v.push(p);
            }
        }
        Self::new(v).expect("the cross-polytope is valid")
    }

    /// The vertex list, in input order.
    pub fn vertices(&self) -> &[LatticePoint4] {
        &self.vertices
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facets, sorted by vertex set.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Membership test for an arbitrary lattice point.
    pub fn contains(&self, x: &LatticePoint4) -> bool {
        self.hull_equations.iter().all(|(e, c)| dot(e, x) == *c)
            && self.facets.iter().all(|f| dot(&f.normal, x) >= f.offset)
    }

    /// Bounding box `(lo, hi)` of the vertices.
    pub fn bounding_box(&self) -> (LatticePoint4, LatticePoint4) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            for k in 0..4 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    fn hull_data(vertices: Vec<LatticePoint4>) -> Self {
        let v0 = vertices[0];
        let diffs: Vec<Vec<i64>> = vertices.iter().map(|v| (0..4).map(|k| v[k] - v0[k]).collect()).collect();
        let basis = independent_rows(&diffs);
        let dim = basis.len();
        let hull_equations = nullspace(&diffs, 4)
            .into_iter()
            .map(|e| {
                let e = [e[0], e[1], e[2], e[3]];
                (e, dot(&e, &v0))
            })
            .collect();
        let facets = if dim == 0 { Vec::new() } else { find_facets(&vertices, &basis) };
        Self { vertices, dim, hull_equations, facets }
    }

    fn is_extreme(&self, i: usize) -> bool {
        if self.dim == 0 {
            return true;
        }
        let normals: Vec<Vec<i64>> =
            self.facets.iter().filter(|f| f.vertex_ids.contains(&i)).map(|f| f.normal.to_vec()).collect();
        independent_rows(&normals).len() == self.dim
    }
}

/// A face of a lattice polytope together with its lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Dimension, from 0 (vertex) to 3 (facet).
    pub dim: usize,
    /// Sorted indices into the polytope's vertex list.
    pub vertex_ids: Vec<usize>,
    /// All lattice points of the closed face, sorted.
    pub lattice_points: Vec<LatticePoint4>,
    /// Lattice points on no proper subface, sorted.
    pub interior_points: Vec<LatticePoint4>,
    /// Indices (into the face list) of faces of dimension `dim - 1` contained in this face.
    pub subfaces: Vec<usize>,
    /// Indices of faces of dimension `dim + 1` containing this face.
    pub superfaces: Vec<usize>,
}

/// All lattice points of `p`, sorted lexicographically.
///
/// The cost is the volume of the bounding box; see
/// [`try_enumerate_lattice_points`] for a guarded variant.
pub fn enumerate_lattice_points(p: &LatticePolytope) -> Vec<LatticePoint4> {
    let (lo, hi) = p.bounding_box();
    let mut out = Vec::new();
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            for c in lo[2]..=hi[2] {
                for d in lo[3]..=hi[3] {
                    let x = [a, b, c, d];
                    if p.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Like [`enumerate_lattice_points`] but refuses bounding boxes larger than
/// [`MAX_BOX_VOLUME`].
pub fn try_enumerate_lattice_points(p: &LatticePolytope) -> Result<Vec<LatticePoint4>> {
    let (lo, hi) = p.bounding_box();
    let vol: u128 = (0..4).map(|k| (hi[k] - lo[k] + 1) as u128).product();
    if vol > MAX_BOX_VOLUME {
        return Err(Error::Unsupported(format!("bounding box of volume {vol} is too large")));
    }
    Ok(enumerate_lattice_points(p))
}

/// All proper faces of a full-dimensional polytope, sorted by dimension and
/// then by vertex set, with incidences and lattice points.
pub fn face_lattice(p: &LatticePolytope) -> Result<Vec<Face>> {
    if p.dim != 4 {
        return Err(Error::NotFullDimensional(p.dim));
    }
    let points = try_enumerate_lattice_points(p)?;
    let mut sets: BTreeSet<Vec<usize>> = p.facets.iter().map(|f| f.vertex_ids.clone()).collect();
    loop {
        let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let c: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                if !c.is_empty() && sets.insert(c) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|ids| {
            let vs: Vec<Vec<i64>> =
                ids.iter().map(|&i| (0..4).map(|k| p.vertices[i][k] - p.vertices[ids[0]][k]).collect()).collect();
            let dim = independent_rows(&vs).len();
            let on: Vec<&Facet> = p.facets.iter().filter(|f| ids.iter().all(|i| f.vertex_ids.contains(i))).collect();
            let lattice_points =
                points.iter().filter(|x| on.iter().all(|f| dot(&f.normal, x) == f.offset)).copied().collect();
            Face {
                dim,
                vertex_ids: ids,
                lattice_points,
                interior_points: Vec::new(),
                subfaces: Vec::new(),
                superfaces: Vec::new(),
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));
    let n = faces.len();
    for i in 0..n {
        let inner: BTreeSet<LatticePoint4> = (0..n)
            .filter(|&j| {
                j != i
                    && faces[j].vertex_ids.len() < faces[i].vertex_ids.len()
                    && faces[j].vertex_ids.iter().all(|x| faces[i].vertex_ids.contains(x))
            })
            .flat_map(|j| faces[j].lattice_points.clone())
            .collect();
        faces[i].interior_points = faces[i].lattice_points.iter().filter(|x| !inner.contains(*x)).copied().collect();
        for j in 0..n {
            if faces[j].dim + 1 == faces[i].dim && faces[j].vertex_ids.iter().all(|x| faces[i].vertex_ids.contains(x)) {
                faces[i].subfaces.push(j);
            }
            if faces[j].dim == faces[i].dim + 1 && faces[i].vertex_ids.iter().all(|x| faces[j].vertex_ids.contains(x)) {
                faces[i].superfaces.push(j);
            }
        }
    }
    Ok(faces)
}

/// Lattice points of a face lying on none of its proper subfaces.
pub fn relative_interior_points(f: &Face) -> Vec<LatticePoint4> {
    f.interior_points.clone()
}

/// Lattice points of a full-dimensional polytope on no facet.
pub fn interior_points(p: &LatticePolytope) -> Result<Vec<LatticePoint4>> {
    if p.dim != 4 {
        return Err(Error::NotFullDimensional(p.dim));
    }
    Ok(try_enumerate_lattice_points(p)?
        .into_iter()
        .filter(|x| p.facets.iter().all(|f| dot(&f.normal, x) > f.offset))
        .collect())
}

/// True when the polytope is reflexive: full-dimensional, the origin is the
/// unique interior lattice point, and every facet has the form
/// `<m, x> >= -1` with `m` a primitive lattice vector.
pub fn is_reflexive(p: &LatticePolytope) -> Result<bool> {
    if p.dim != 4 {
        return Ok(false);
    }
    let interior = interior_points(p)?;
    Ok(interior == vec![[0; 4]] && p.facets.iter().all(|f| f.offset == -1))
}

/// Batyrev's formula `h^{2,1} = l(P) - n - 1 - sum over facets of l*(facet)`
/// for a reflexive four-dimensional polytope, with `l(P)` the total number
/// of lattice points of `P`.
pub fn batyrev_h21(p: &LatticePolytope) -> Result<i64> {
    if p.dim != 4 {
        return Err(Error::NotFullDimensional(p.dim));
    }
    if !is_reflexive(p)? {
        return Err(Error::NotReflexive(
            "the origin must be the unique interior point and every facet at distance one".into(),
        ));
    }
    let total = try_enumerate_lattice_points(p)?.len() as i64;
    let facet_interiors: i64 =
        face_lattice(p)?.iter().filter(|f| f.dim == 3).map(|f| f.interior_points.len() as i64).sum();
    Ok(total - 4 - 1 - facet_interiors)
}

/// Number of lattice points `m` with `<m, v> >= -1` for every ray `v` of a
/// complete fan: the dimension of the space of anticanonical sections.
pub fn count_antik_sections(fan: &Fan) -> Result<u64> {
    fan.validate()?;
    let rays = fan.rays();
    // Each maximal cone contributes the vertex m with <m, v_i> = -1 on its
    // rays; the section polytope lies in the bounding box of these points.
    let mut lo = [i64::MAX; 4];
    let mut hi = [i64::MIN; 4];
    for cone in fan.max_cones() {
        let a: Vec<Vec<i64>> = cone.iter().map(|&r| rays[r].to_vec()).collect();
        let m = solve_integer(&a, &[-1, -1, -1, -1])
            .ok_or_else(|| Error::InvalidFan("cone vertex of the section polytope is not integral".into()))?;
        for k in 0..4 {
            lo[k] = lo[k].min(m[k]);
            hi[k] = hi[k].max(m[k]);
        }
    }
    let vol: u128 = (0..4).map(|k| (hi[k] - lo[k] + 1) as u128).product();
    if vol > MAX_BOX_VOLUME {
        return Err(Error::Unsupported(format!("section polytope box of volume {vol} is too large")));
    }
    let mut count = 0u64;
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            for c in lo[2]..=hi[2] {
                for d in lo[3]..=hi[3] {
                    let m = [a, b, c, d];
                    if rays.iter().all(|v| dot(&m, v) >= -1) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn find_facets(vertices: &[LatticePoint4], basis: &[Vec<i64>]) -> Vec<Facet> {
    let d = basis.len();
    let n = vertices.len();
    let mut found: BTreeMap<Vec<usize>, Facet> = BTreeMap::new();
    for subset in combinations(n, d) {
        let base = vertices[subset[0]];
        let g: Vec<Vec<i64>> = subset[1..]
            .iter()
            .map(|&j| {
                let f: Vec<i64> = (0..4).map(|k| vertices[j][k] - base[k]).collect();
                basis.iter().map(|b| b.iter().zip(&f).map(|(x, y)| x * y).sum()).collect()
            })
            .collect();
        let null = nullspace(&g, d);
        if null.len() != 1 {
            continue;
        }
        let mut a = [0i64; 4];
        for (lam, b) in null[0].iter().zip(basis) {
            for k in 0..4 {
                a[k] += lam * b[k];
            }
        }
        let g = a.iter().fold(0i64, |acc, x| acc.gcd(x));
        if g == 0 {
            continue;
        }
        for x in a.iter_mut() {
            *x /= g;
        }
        let c = dot(&a, &base);
        let vals: Vec<i64> = vertices.iter().map(|v| dot(&a, v)).collect();
        let (normal, offset) = if vals.iter().all(|&x| x >= c) {
            (a, c)
        } else if vals.iter().all(|&x| x <= c) {
            ([-a[0], -a[1], -a[2], -a[3]], -c)
        } else {
            continue;
        };
        let ids: Vec<usize> = (0..n).filter(|&i| vals[i] == c).collect();
        found.entry(ids.clone()).or_insert(Facet { normal, offset, vertex_ids: ids });
    }
    found.into_values().collect()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn to_rational_rows(rows: &[Vec<i64>], n: usize) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            assert_eq!(r.len(), n, "ragged input row");
            r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
        })
        .collect()
}

/// Reduced row echelon form; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>], n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A maximal linearly independent subset of the rows, greedily from the top.
pub(crate) fn independent_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for r in rows {
        let mut trial = chosen.clone();
        trial.push(r.clone());
        let n = r.len();
        let mut m = to_rational_rows(&trial, n);
        if rref(&mut m, n).len() == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Primitive integer basis of the right nullspace of `rows` (each of length `n`).
pub(crate) fn nullspace(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m = to_rational_rows(rows, n);
    let pivots = rref(&mut m, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> =
                v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.iter().map(|x| (x / &g).to_i64().expect("nullspace entries fit in i64")).collect()
        })
        .collect()
}

/// Solves the square system `a x = b` when its solution is integral.
pub(crate) fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            row.iter().chain(std::iter::once(&rhs)).map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
        })
        .collect();
    let pivots = rref(&mut m, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = Vec::with_capacity(n);
    for row in &m {
        let v = &row[n];
        if !v.is_integer() {
            return None;
        }
        x.push(v.to_integer().to_i64()?);
    }
    Some(x)
}

/// Determinant of a small integer matrix given by rows.
pub(crate) fn det_i64(a: &[Vec<i64>]) -> i64 {
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    crate::exact_linalg::determinant(&big).to_i64().expect("determinant fits in i64")
}

impl Serialize for LatticePolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LatticePolytope", 3)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("facets", &self.facets)?;
        st.end()
    }
}
