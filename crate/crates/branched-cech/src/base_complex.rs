//! The base of the torus fibration: the boundary of a reflexive 4-simplex,
//! its discriminant graph, the open cover by edge, face and cell elements,
//! and the nerve of that cover.
//!
//! Each 2-face carries the regular triangulation by unit triangles. The
//! discriminant graph is the union of the 1-cells of the barycentric
//! subdivision of this triangulation that avoid lattice points: one
//! negative trivalent vertex at the barycenter of every unit triangle, one
//! positive vertex at the midpoint of every unit segment of a polytope edge,
//! and one segment dual to every unit edge of every 2-face.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{dot, face_lattice, LatticePoint4, LatticePolytope};

/// A point with rational coordinates `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalPoint {
    /// Numerators.
    pub num: [i64; 4],
    /// Common positive denominator.
    pub den: i64,
}

impl RationalPoint {
    /// True when the point is a lattice point.
    pub fn is_integral(&self) -> bool {
        self.num.iter().all(|x| x % self.den == 0)
    }
}

/// The cell complex `B`, the boundary of a 4-simplex.
#[derive(Clone, Debug)]
pub struct BaseComplex {
    polytope: LatticePolytope,
    vertices: Vec<LatticePoint4>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    cells: Vec<[usize; 4]>,
    cell_normals: Vec<LatticePoint4>,
    cell_offsets: Vec<i64>,
    edge_length: i64,
    points: Vec<LatticePoint4>,
}

/// Builds the base complex of a 4-simplex.
///
/// Cells are indexed by the vertex they omit, so cell `t` is the facet
/// opposite vertex `t`. Edges and 2-faces are listed lexicographically by
/// vertex set. Every polytope edge must have the same lattice length and
/// every 2-face must be a dilated unimodular triangle.
pub fn build_base(p: &LatticePolytope) -> Result<BaseComplex> {
    if p.dim() != 4 {
        return Err(Error::NotFullDimensional(p.dim()));
    }
    if p.vertices().len() != 5 {
        return Err(Error::Unsupported(format!("only 4-simplices are supported, got {} vertices", p.vertices().len())));
    }
    let faces_all = face_lattice(p)?;
    let count = |d: usize| faces_all.iter().filter(|f| f.dim == d).count();
    if (count(0), count(1), count(2), count(3)) != (5, 10, 10, 5) {
        return Err(Error::Unsupported("face counts differ from a 4-simplex".into()));
    }
    let vertices = p.vertices().to_vec();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            edges.push([a, b]);
            for c in b + 1..5 {
                faces.push([a, b, c]);
            }
        }
    }
    let mut cells = Vec::new();
    let mut cell_normals = Vec::new();
    let mut cell_offsets = Vec::new();
    for t in 0..5 {
        let vs: Vec<usize> = (0..5).filter(|&v| v != t).collect();
        cells.push([vs[0], vs[1], vs[2], vs[3]]);
        let facet =
            p.facets().iter().find(|f| f.vertex_ids == vs).ok_or_else(|| Error::Unsupported("missing facet".into()))?;
        cell_normals.push(facet.normal);
        cell_offsets.push(facet.offset);
    }
    let lengths: Vec<i64> = edges
        .iter()
        .map(|&[a, b]| (0..4).fold(0i64, |g, k| num_integer::gcd(g, vertices[b][k] - vertices[a][k])))
        .collect();
    let edge_length = lengths[0];
    if lengths.iter().any(|&l| l != edge_length) {
        return Err(Error::Unsupported("edges have unequal lattice lengths".into()));
    }
    let l = edge_length as usize;
    for f in faces_all.iter().filter(|f| f.dim == 2) {
        if f.lattice_points.len() != (l + 1) * (l + 2) / 2 {
            return Err(Error::Unsupported("2-faces are not dilated unimodular triangles".into()));
        }
    }
    let mut points: Vec<LatticePoint4> =
        faces_all.iter().filter(|f| f.dim == 3).flat_map(|f| f.lattice_points.clone()).collect();
    points.sort();
    points.dedup();
    Ok(BaseComplex {
        polytope: p.clone(),
        vertices,
        edges,
        faces,
        cells,
        cell_normals,
        cell_offsets,
        edge_length,
        points,
    })
}

impl BaseComplex {
    /// The base complex of the quintic simplex.
    pub fn quintic() -> Self {
        build_base(&LatticePolytope::quintic()).expect("the quintic simplex is supported")
    }

    /// The underlying polytope.
    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    /// Polytope vertices.
    pub fn vertices(&self) -> &[LatticePoint4] {
        &self.vertices
    }

    /// Edges as sorted vertex pairs, lexicographic.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// 2-faces as sorted vertex triples, lexicographic.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// 3-cells; cell `t` omits vertex `t`.
    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    /// Primitive inner normal of cell `t`.
    pub fn cell_normal(&self, t: usize) -> LatticePoint4 {
        self.cell_normals[t]
    }

    /// Offset of cell `t`: its points satisfy `<normal, x> = offset`.
    pub fn cell_offset(&self, t: usize) -> i64 {
        self.cell_offsets[t]
    }

    /// Common lattice length of the polytope edges.
    pub fn edge_length(&self) -> i64 {
        self.edge_length
    }

    /// Cell counts by dimension `(vertices, edges, 2-faces, 3-cells)`.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len(), self.cells.len())
    }

    /// All boundary lattice points, sorted.
    pub fn boundary_points(&self) -> &[LatticePoint4] {
        &self.points
    }

    /// True when the point lies in cell `t`.
    pub fn in_cell(&self, x: &LatticePoint4, t: usize) -> bool {
        dot(&self.cell_normals[t], x) == self.cell_offsets[t]
    }

    /// Cells containing every vertex in `vs`, ascending.
    pub fn cells_containing(&self, vs: &[usize]) -> Vec<usize> {
        (0..5).filter(|t| !vs.contains(t)).collect()
    }

    /// Lattice points of the face spanned by the vertex set `vs`, sorted.
    pub fn points_on(&self, vs: &[usize]) -> Vec<LatticePoint4> {
        let omit: Vec<usize> = (0..5).filter(|t| !vs.contains(t)).collect();
        self.points.iter().filter(|x| omit.iter().all(|&t| self.in_cell(x, t))).copied().collect()
    }

    /// Index of the edge with the given endpoints.
    pub fn edge_index(&self, a: usize, b: usize) -> usize {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().position(|e| *e == key).expect("edge exists")
    }

    /// Index of the 2-face with the given vertex set.
    pub fn face_index(&self, vs: [usize; 3]) -> usize {
        let mut key = vs;
        key.sort();
        self.faces.iter().position(|f| *f == key).expect("face exists")
    }

    /// Unit step from vertex `a` towards vertex `b` along their edge.
    pub fn unit_direction(&self, a: usize, b: usize) -> LatticePoint4 {
        std::array::from_fn(|k| (self.vertices[b][k] - self.vertices[a][k]) / self.edge_length)
    }

    /// Unit edges of the regular triangulation lying in the face spanned by
    /// `vs` (an edge or a 2-face), as sorted point pairs, sorted.
    pub fn unit_edges_on(&self, vs: &[usize]) -> Vec<[LatticePoint4; 2]> {
        let pts = self.points_on(vs);
        let mut dirs = Vec::new();
        for &a in vs {
            for &b in vs {
                if a != b {
                    dirs.push(self.unit_direction(a, b));
                }
            }
        }
        let mut out: Vec<[LatticePoint4; 2]> = Vec::new();
        for p in &pts {
            for d in &dirs {
                let q = add(p, d);
                if pts.contains(&q) {
                    let pair = if *p < q { [*p, q] } else { [q, *p] };
                    if !out.contains(&pair) {
                        out.push(pair);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Lattice coordinates `(i, j)` of the points of 2-face `f` with
    /// respect to its lowest vertex and the unit steps to the other two.
    fn face_grid(&self, f: usize) -> BTreeMap<(i64, i64), LatticePoint4> {
        let [a, b, c] = self.faces[f];
        let (d1, d2) = (self.unit_direction(a, b), self.unit_direction(a, c));
        let l = self.edge_length;
        let mut grid = BTreeMap::new();
        for i in 0..=l {
            for j in 0..=l - i {
                let mut p = self.vertices[a];
                for k in 0..4 {
                    p[k] += i * d1[k] + j * d2[k];
                }
                grid.insert((i, j), p);
            }
        }
        grid
    }
}

pub(crate) fn add(a: &LatticePoint4, b: &LatticePoint4) -> LatticePoint4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Sign type of a discriminant vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexSign {
    /// Lies in the interior of a polytope edge.
    Positive,
    /// Lies in the interior of a 2-face.
    Negative,
}

/// A vertex of the discriminant graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaVertex {
    /// Sign type.
    pub sign: VertexSign,
    /// Dimension of the host cell: 1 for positive, 2 for negative vertices.
    pub host_dim: usize,
    /// Index of the host edge or 2-face.
    pub host: usize,
    /// Barycentric coordinates with respect to the host cell's vertices.
    pub barycentric: Vec<Ratio<i64>>,
    /// Ambient rational coordinates.
    pub location: RationalPoint,
}

/// A segment of the discriminant graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSegment {
    /// The 2-face containing the segment.
    pub face: usize,
    /// Endpoint vertex ids.
    pub ends: [usize; 2],
    /// The unit edge of the triangulation that the segment crosses.
    pub dual_edge: [LatticePoint4; 2],
}

/// A hexagonal region of a 2-face around an interior lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hexagon {
    /// Host 2-face.
    pub face: usize,
    /// The interior lattice point at the center.
    pub center: LatticePoint4,
    /// Boundary segments in anticlockwise order, each with the sign of its
    /// stored orientation relative to the anticlockwise boundary.
    pub boundary_arcs: Vec<(usize, i8)>,
}

/// The discriminant graph together with its hexagonal regions.
#[derive(Clone, Debug)]
pub struct DiscriminantGraph {
    /// Vertices, positive ones first.
    pub vertices: Vec<DeltaVertex>,
    /// Segments, grouped by 2-face.
    pub segments: Vec<DeltaSegment>,
    /// Hexagons, grouped by 2-face.
    pub hexagons: Vec<Hexagon>,
}

impl DiscriminantGraph {
    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for s in &self.segments {
            deg[s.ends[0]] += 1;
            deg[s.ends[1]] += 1;
        }
        deg
    }

    /// The segment crossing a given unit edge of a given 2-face.
    pub fn segment_crossing(&self, face: usize, p: LatticePoint4, q: LatticePoint4) -> Option<usize> {
        let key = if p < q { [p, q] } else { [q, p] };
        self.segments.iter().position(|s| s.face == face && s.dual_edge == key)
    }
}

/// Builds the discriminant graph on every 2-face's unit triangulation.
pub fn build_discriminant(b: &BaseComplex) -> DiscriminantGraph {
    let l = b.edge_length;
    let mut vertices = Vec::new();
    let mut positive: BTreeMap<[LatticePoint4; 2], usize> = BTreeMap::new();
    for (ei, &[a, c]) in b.edges.iter().enumerate() {
        let d = b.unit_direction(a, c);
        for k in 0..l {
            let mut num = [0; 4];
            let mut p = b.vertices[a];
            for x in 0..4 {
                num[x] = 2 * b.vertices[a][x] + (2 * k + 1) * d[x];
                p[x] += k * d[x];
            }
            let q = add(&p, &d);
            positive.insert(if p < q { [p, q] } else { [q, p] }, vertices.len());
            let t = Ratio::new(2 * k + 1, 2 * l);
            vertices.push(DeltaVertex {
                sign: VertexSign::Positive,
                host_dim: 1,
                host: ei,
                barycentric: vec![Ratio::from_integer(1) - t, t],
                location: RationalPoint { num, den: 2 },
            });
        }
    }
    let mut segments = Vec::new();
    let mut hexagons = Vec::new();
    for f in 0..b.faces.len() {
        let grid = b.face_grid(f);
        let mut triangles: BTreeMap<[LatticePoint4; 3], usize> = BTreeMap::new();
        let mut tri_of_grid: Vec<[(i64, i64); 3]> = Vec::new();
        for i in 0..l {
            for j in 0..l - i {
                tri_of_grid.push([(i, j), (i + 1, j), (i, j + 1)]);
                if i + j + 2 <= l {
                    tri_of_grid.push([(i + 1, j), (i, j + 1), (i + 1, j + 1)]);
                }
            }
        }
        for tri in &tri_of_grid {
            let mut pts = [grid[&tri[0]], grid[&tri[1]], grid[&tri[2]]];
            pts.sort();
            let mut num = [0; 4];
            for p in &pts {
                for x in 0..4 {
                    num[x] += p[x];
                }
            }
            let (si, sj) = tri.iter().fold((0, 0), |(a, c), &(i, j)| (a + i, c + j));
            let bx = Ratio::new(si, 3 * l);
            let by = Ratio::new(sj, 3 * l);
            triangles.insert(pts, vertices.len());
            vertices.push(DeltaVertex {
                sign: VertexSign::Negative,
                host_dim: 2,
                host: f,
                barycentric: vec![Ratio::from_integer(1) - bx - by, bx, by],
                location: RationalPoint { num, den: 3 },
            });
        }
        let seg_start = segments.len();
        for [p, q] in b.unit_edges_on(&b.faces[f]) {
            let adjacent: Vec<usize> =
                triangles.iter().filter(|(tri, _)| tri.contains(&p) && tri.contains(&q)).map(|(_, &id)| id).collect();
            let ends = match adjacent.as_slice() {
                [x, y] => [*x, *y],
                [x] => [*x, positive[&[p, q]]],
                _ => unreachable!("a unit edge borders one or two unit triangles"),
            };
            segments.push(DeltaSegment { face: f, ends, dual_edge: [p, q] });
        }
        // Hexagons around interior points, boundary traversed anticlockwise
        // in the (d1, d2) frame.
        let steps = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        for i in 1..l {
            for j in 1..l - i {
                let c = grid[&(i, j)];
                let nb: Vec<LatticePoint4> = steps.iter().map(|&(di, dj)| grid[&(i + di, j + dj)]).collect();
                let tri_id = |x: LatticePoint4, y: LatticePoint4| {
                    let mut k = [c, x, y];
                    k.sort();
                    triangles[&k]
                };
                let mut arcs = Vec::new();
                for k in 0..6 {
                    let from = tri_id(nb[(k + 5) % 6], nb[k]);
                    let to = tri_id(nb[k], nb[(k + 1) % 6]);
                    let key = if c < nb[k] { [c, nb[k]] } else { [nb[k], c] };
                    let sid = (seg_start..segments.len())
                        .find(|&s| segments[s].dual_edge == key)
                        .expect("hexagon arc exists");
                    let sign = if segments[sid].ends == [from, to] { 1 } else { -1 };
                    arcs.push((sid, sign));
                }
                hexagons.push(Hexagon { face: f, center: c, boundary_arcs: arcs });
            }
        }
    }
    DiscriminantGraph { vertices, segments, hexagons }
}

/// An element of the open cover: a neighbourhood of an edge (absorbing its
/// endpoint vertex balls), of the interior of a 2-face, or of a 3-cell.
///
/// The derived order puts edges before faces before cells, each type
/// ordered by index; Cech signs use this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CoverElement {
    /// Edge index.
    Edge(usize),
    /// 2-face index.
    Face(usize),
    /// 3-cell index (the omitted vertex).
    Cell(usize),
}

/// The 25 cover elements in cover order.
pub fn build_cover(b: &BaseComplex) -> Vec<CoverElement> {
    (0..b.edges.len())
        .map(CoverElement::Edge)
        .chain((0..b.faces.len()).map(CoverElement::Face))
        .chain((0..b.cells.len()).map(CoverElement::Cell))
        .collect()
}

/// A nonempty intersection of cover elements, sorted in cover order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NerveSimplex(pub Vec<CoverElement>);

impl NerveSimplex {
    /// Cech degree (arity minus one).
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// The face obtained by deleting the `j`-th element.
    pub fn delete(&self, j: usize) -> NerveSimplex {
        let mut v = self.0.clone();
        v.remove(j);
        NerveSimplex(v)
    }

    /// Edge members.
    pub fn edges(&self) -> Vec<usize> {
        self.0.iter().filter_map(|c| if let CoverElement::Edge(e) = c { Some(*e) } else { None }).collect()
    }

    /// 2-face members.
    pub fn faces(&self) -> Vec<usize> {
        self.0.iter().filter_map(|c| if let CoverElement::Face(f) = c { Some(*f) } else { None }).collect()
    }

    /// Cell members.
    pub fn cells(&self) -> Vec<usize> {
        self.0.iter().filter_map(|c| if let CoverElement::Cell(t) = c { Some(*t) } else { None }).collect()
    }
}

/// The nerve, simplices grouped by degree.
#[derive(Clone, Debug)]
pub struct Nerve {
    /// `by_degree[k]` lists the degree-`k` simplices in lexicographic order.
    pub by_degree: Vec<Vec<NerveSimplex>>,
}

impl Nerve {
    /// Simplex counts by degree.
    pub fn counts(&self) -> Vec<usize> {
        self.by_degree.iter().map(|v| v.len()).collect()
    }
}

fn vertex_set(b: &BaseComplex, c: CoverElement) -> Vec<usize> {
    match c {
        CoverElement::Edge(e) => b.edges[e].to_vec(),
        CoverElement::Face(f) => b.faces[f].to_vec(),
        CoverElement::Cell(t) => b.cells[t].to_vec(),
    }
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Intersection rules for cover elements.
///
/// A set of cover elements meets when it holds at most one face and at
/// most one cell, two or more edges share exactly one common vertex, every
/// edge lies in the face and the cell, the face lies in the cell, and no
/// face accompanies three or more edges.
pub fn intersects(b: &BaseComplex, s: &[CoverElement]) -> bool {
    let es: Vec<Vec<usize>> =
        s.iter().filter(|c| matches!(c, CoverElement::Edge(_))).map(|&c| vertex_set(b, c)).collect();
    let fs: Vec<Vec<usize>> =
        s.iter().filter(|c| matches!(c, CoverElement::Face(_))).map(|&c| vertex_set(b, c)).collect();
    let cs: Vec<Vec<usize>> =
        s.iter().filter(|c| matches!(c, CoverElement::Cell(_))).map(|&c| vertex_set(b, c)).collect();
    if fs.len() > 1 || cs.len() > 1 {
        return false;
    }
    if es.len() >= 2 {
        let common: Vec<usize> = (0..5).filter(|v| es.iter().all(|e| e.contains(v))).collect();
        if common.len() != 1 {
            return false;
        }
    }
    for f in &fs {
        if !es.iter().all(|e| subset(e, f)) {
            return false;
        }
    }
    for c in &cs {
        if !es.iter().all(|e| subset(e, c)) || !fs.iter().all(|f| subset(f, c)) {
            return false;
        }
    }
    !(es.len() >= 3 && !fs.is_empty())
}

/// All nonempty intersections of the cover.
pub fn build_nerve(b: &BaseComplex, cover: &[CoverElement]) -> Nerve {
    let mut by_degree = Vec::new();
    for k in 1..=cover.len() {
        let level: Vec<NerveSimplex> = crate::lattice::combinations(cover.len(), k)
            .into_iter()
            .map(|idx| idx.into_iter().map(|i| cover[i]).collect::<Vec<_>>())
            .filter(|s| intersects(b, s))
            .map(NerveSimplex)
            .collect();
        if level.is_empty() {
            break;
        }
        by_degree.push(level);
    }
    Nerve { by_degree }
}

/// A monodromy generator: the loop around the discriminant segments of a
/// 2-face that cross a given edge of that face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Branch {
    /// 2-face index.
    pub face: usize,
    /// Edge index, an edge of the face.
    pub edge: usize,
}

/// Monodromy generators whose loops lie in the region of a nerve simplex.
///
/// A single edge encloses the generators of the three faces through it; a
/// single face encloses the generators of its two edges through its lowest
/// vertex; an incident edge-face pair encloses one generator; every other
/// simplex encloses none.
pub fn enclosed_branches(b: &BaseComplex, s: &NerveSimplex) -> Vec<Branch> {
    match s.0.as_slice() {
        [CoverElement::Edge(e)] => {
            let ev = b.edges[*e];
            (0..b.faces.len()).filter(|&f| subset(&ev, &b.faces[f])).map(|f| Branch { face: f, edge: *e }).collect()
        }
        [CoverElement::Face(f)] => {
            let [a, x, y] = b.faces[*f];
            vec![Branch { face: *f, edge: b.edge_index(a, x) }, Branch { face: *f, edge: b.edge_index(a, y) }]
        }
        [CoverElement::Edge(e), CoverElement::Face(f)] if subset(&b.edges[*e], &b.faces[*f]) => {
            vec![Branch { face: *f, edge: *e }]
        }
        _ => Vec::new(),
    }
}

/// The polytope vertex whose chart is used to label sheets near a simplex:
/// the lowest vertex of its edge, or of its face when it has no edge.
pub fn chart_vertex(b: &BaseComplex, s: &NerveSimplex) -> usize {
    if let Some(&e) = s.edges().first() {
        return b.edges[e][0];
    }
    if let Some(&f) = s.faces().first() {
        return b.faces[f][0];
    }
    let t = s.cells()[0];
    b.cells[t][0]
}
