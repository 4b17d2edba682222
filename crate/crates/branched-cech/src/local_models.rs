//! Finite 2-complex models of the preimages of cover elements and their
//! intersections.
//!
//! A region is a set of charts of the local system. Its covering graph has
//! one node per (chart, sheet) and one edge per (overlap, ambient chart,
//! sheet), oriented from the overlap to the ambient chart. Each meridian
//! (a unit edge of a 2-face, around which the discriminant segment runs)
//! contributes the lifts of its closed walk as 2-cells. First homology is
//! presented by the non-tree edges of a spanning forest subject to the
//! 2-cells, and first cohomology is the kernel of that relation matrix.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::base_complex::{BaseComplex, NerveSimplex};
use crate::error::{Error, Result};
use crate::exact_linalg::{rank_mod2, rank_rational, AbelianGroup, KernelBasis, Ring, SparseIntMatrix};
use crate::lattice::LatticePoint4;
use crate::monodromy::{Chart, LocalSystem};

/// A meridian: the unit edge `p q` of 2-face `face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Meridian {
    /// 2-face index.
    pub face: usize,
    /// First lattice point of the unit edge.
    pub p: LatticePoint4,
    /// Second lattice point of the unit edge.
    pub q: LatticePoint4,
}

/// An edge of the covering graph: sheet `sheet` of overlap `from` glued to
/// its image in the ambient chart `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GraphEdge {
    /// The overlap chart.
    pub from: Chart,
    /// The ambient cell or point chart.
    pub to: Chart,
    /// Sheet over the overlap.
    pub sheet: u8,
}

/// A finitely presented first homology group with labelled generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Presentation {
    /// Generator labels.
    pub labels: Vec<String>,
    /// Relations by generators.
    pub relations: SparseIntMatrix,
}

impl H1Presentation {
    /// The presented group.
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::presented(&self.relations)
    }

    /// Number of generators.
    pub fn generators(&self) -> usize {
        self.labels.len()
    }

    /// JSON dump with labelled generators and relation triplets.
    pub fn to_json(&self) -> serde_json::Value {
        let triplets: Vec<(usize, usize, String)> =
            self.relations.iter().map(|(r, c, v)| (r, c, v.to_string())).collect();
        serde_json::json!({
            "generators": self.labels,
            "relations": {"rows": self.relations.rows(), "cols": self.relations.cols(), "entries": triplets},
        })
    }
}

/// A region of the branched cover: charts, meridians and the derived
/// covering graph with its 2-cells.
#[derive(Clone, Debug)]
pub struct Region<'a> {
    ls: &'a LocalSystem,
    name: String,
    pieces: Vec<Chart>,
    meridians: Vec<Meridian>,
    nodes: Vec<(Chart, u8)>,
    node_index: HashMap<(Chart, u8), usize>,
    edges: Vec<GraphEdge>,
    edge_ends: Vec<[usize; 2]>,
    edge_index: HashMap<GraphEdge, usize>,
    two_cells: Vec<BTreeMap<usize, i64>>,
    in_tree: Vec<bool>,
    component: Vec<usize>,
    components: usize,
}

impl<'a> Region<'a> {
    /// Builds a region from its charts and meridians.
    ///
    /// Fails when a meridian walk leaves the region.
    pub fn new(
        ls: &'a LocalSystem,
        name: impl Into<String>,
        pieces: Vec<Chart>,
        meridians: Vec<Meridian>,
    ) -> Result<Self> {
        let mut pieces = pieces;
        pieces.sort();
        pieces.dedup();
        let mut meridians = meridians;
        meridians.sort();
        meridians.dedup();
        let mut nodes = Vec::new();
        let mut node_index = HashMap::new();
        for &c in &pieces {
            for x in ls.sheets(c) {
                node_index.insert((c, x), nodes.len());
                nodes.push((c, x));
            }
        }
        let mut edges = Vec::new();
        let mut edge_ends = Vec::new();
        let mut edge_index = HashMap::new();
        for &c in &pieces {
            if let Chart::Overlap(t, i) = c {
                for to in [Chart::Cell(t), Chart::Point(i)] {
                    if !node_index.contains_key(&(to, ls.sheets(to)[0])) {
                        continue;
                    }
                    for x in ls.sheets(c) {
                        let y = ls.transport(c, to, x)?;
                        let e = GraphEdge { from: c, to, sheet: x };
                        edge_index.insert(e, edges.len());
                        edges.push(e);
                        edge_ends.push([node_index[&(c, x)], node_index[&(to, y)]]);
                    }
                }
            }
        }
        let mut r = Self {
            ls,
            name: name.into(),
            pieces,
            meridians,
            nodes,
            node_index,
            edges,
            edge_ends,
            edge_index,
            two_cells: Vec::new(),
            in_tree: Vec::new(),
            component: Vec::new(),
            components: 0,
        };
        r.two_cells = r.lift_meridians()?;
        r.build_forest();
        Ok(r)
    }

    fn step(&self, a: Chart, b: Chart, x: u8) -> Result<(u8, usize, i64)> {
        let y = self.ls.transport(a, b, x)?;
        if let Some(&e) = self.edge_index.get(&GraphEdge { from: a, to: b, sheet: x }) {
            return Ok((y, e, 1));
        }
        match self.edge_index.get(&GraphEdge { from: b, to: a, sheet: y }) {
            Some(&e) => Ok((y, e, -1)),
            None => Err(Error::Inconsistent(format!("{}: step {a:?} -> {b:?} leaves the region", self.name))),
        }
    }

    /// Lifts a closed walk of charts starting on sheet `x0`, repeating it
    /// until the lift closes. Returns the signed edge chain.
    pub fn lift_walk(&self, walk: &[Chart], x0: u8) -> Result<BTreeMap<usize, i64>> {
        let mut chain: BTreeMap<usize, i64> = BTreeMap::new();
        let mut x = x0;
        for _ in 0..crate::monodromy::SHEETS {
            for w in walk.windows(2) {
                let (y, e, s) = self.step(w[0], w[1], x)?;
                *chain.entry(e).or_insert(0) += s;
                x = y;
            }
            if x == x0 {
                chain.retain(|_, v| *v != 0);
                return Ok(chain);
            }
        }
        Err(Error::Inconsistent(format!("{}: lifted walk does not close", self.name)))
    }

    fn lift_meridians(&self) -> Result<Vec<BTreeMap<usize, i64>>> {
        let mut cells = Vec::new();
        for m in &self.meridians {
            let walk = self.ls.meridian_walk(m.face, &m.p, &m.q);
            let mut seen = Vec::new();
            for x0 in self.ls.sheets(walk[0]) {
                if seen.contains(&x0) {
                    continue;
                }
                let mut chain: BTreeMap<usize, i64> = BTreeMap::new();
                let mut x = x0;
                loop {
                    seen.push(x);
                    for w in walk.windows(2) {
                        let (y, e, s) = self.step(w[0], w[1], x)?;
                        *chain.entry(e).or_insert(0) += s;
                        x = y;
                    }
                    if x == x0 {
                        break;
                    }
                }
                chain.retain(|_, v| *v != 0);
                cells.push(chain);
            }
        }
        Ok(cells)
    }

    fn build_forest(&mut self) {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        self.in_tree = vec![false; self.edges.len()];
        for (e, &[a, b]) in self.edge_ends.iter().enumerate() {
            let (u, v) = (find(&mut parent, a), find(&mut parent, b));
            if u != v {
                parent[u] = v;
                self.in_tree[e] = true;
            }
        }
        let mut label = HashMap::new();
        self.component = (0..n)
            .map(|i| {
                let root = find(&mut parent, i);
                let next = label.len();
                *label.entry(root).or_insert(next)
            })
            .collect();
        self.components = label.len();
    }

    /// Region name used in diagnostics.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The local system the region lives in.
    pub fn local_system(&self) -> &'a LocalSystem {
        self.ls
    }

    /// Charts of the region, sorted.
    pub fn pieces(&self) -> &[Chart] {
        &self.pieces
    }

    /// Meridians of the region, sorted.
    pub fn meridians(&self) -> &[Meridian] {
        &self.meridians
    }

    /// Covering-graph nodes.
    pub fn nodes(&self) -> &[(Chart, u8)] {
        &self.nodes
    }

    /// Index of a node.
    pub fn node(&self, c: Chart, sheet: u8) -> Option<usize> {
        self.node_index.get(&(c, sheet)).copied()
    }

    /// Covering-graph edges.
    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Endpoint nodes of an edge, overlap side first.
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        self.edge_ends[e]
    }

    /// Index of an edge.
    pub fn edge(&self, e: &GraphEdge) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    /// 2-cells as signed edge chains.
    pub fn two_cells(&self) -> &[BTreeMap<usize, i64>] {
        &self.two_cells
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Component of a node; components are numbered by first node.
    pub fn component_of(&self, node: usize) -> usize {
        self.component[node]
    }

    /// True for edges of the spanning forest.
    pub fn in_tree(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    /// Non-tree edges in index order; they generate first homology.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| !self.in_tree[e]).collect()
    }

    /// The boundary map from 2-cells to edges, rows by 2-cells.
    pub fn boundary2(&self) -> SparseIntMatrix {
        let rows: Vec<BTreeMap<usize, BigInt>> =
            self.two_cells.iter().map(|c| c.iter().map(|(&e, &v)| (e, BigInt::from(v))).collect()).collect();
        SparseIntMatrix::from_row_maps(self.edges.len(), &rows).expect("2-cells lie on region edges")
    }

    /// The boundary map from edges to nodes, rows by edges.
    pub fn boundary1(&self) -> SparseIntMatrix {
        let rows: Vec<BTreeMap<usize, BigInt>> = self
            .edge_ends
            .iter()
            .map(|&[a, b]| {
                let mut m = BTreeMap::new();
                m.insert(b, BigInt::from(1));
                *m.entry(a).or_insert_with(BigInt::zero) -= 1;
                m
            })
            .collect();
        SparseIntMatrix::from_row_maps(self.nodes.len(), &rows).expect("edges join region nodes")
    }

    /// First homology presented by the non-tree edges and the 2-cells.
    pub fn presentation(&self) -> H1Presentation {
        let gens = self.generators();
        let pos: HashMap<usize, usize> = gens.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let rows: Vec<BTreeMap<usize, BigInt>> = self
            .two_cells
            .iter()
            .map(|c| c.iter().filter_map(|(e, &v)| pos.get(e).map(|&i| (i, BigInt::from(v)))).collect())
            .collect();
        let labels = gens.iter().map(|&e| edge_label(&self.edges[e])).collect();
        H1Presentation {
            labels,
            relations: SparseIntMatrix::from_row_maps(gens.len(), &rows).expect("relations lie on generators"),
        }
    }

    /// First homology.
    pub fn h1(&self) -> AbelianGroup {
        self.presentation().group()
    }

    /// First cohomology with the given coefficients, with an explicit basis
    /// of cocycles vanishing on the spanning forest.
    pub fn cohomology(&self, ring: Ring) -> H1Cocycles<'_, 'a> {
        let gens = self.generators();
        let gen_pos = gens.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let kernel = KernelBasis::new(&self.presentation().relations, ring);
        H1Cocycles { region: self, gens, gen_pos, kernel }
    }

    /// Path in the spanning forest from a node to the root of its tree, as
    /// a signed edge chain.
    fn root_paths(&self) -> Vec<Option<(usize, usize, i64)>> {
        let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); self.nodes.len()];
        for (e, &[a, b]) in self.edge_ends.iter().enumerate() {
            if self.in_tree[e] {
                adj[a].push((b, e, 1));
                adj[b].push((a, e, -1));
            }
        }
        let mut parent: Vec<Option<(usize, usize, i64)>> = vec![None; self.nodes.len()];
        let mut visited = vec![false; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &(v, e, s) in &adj[u] {
                    if !visited[v] {
                        visited[v] = true;
                        parent[v] = Some((u, e, s));
                        stack.push(v);
                    }
                }
            }
        }
        parent
    }

    /// The fundamental cycle of every generator as a signed edge chain.
    pub fn fundamental_cycles(&self) -> Vec<BTreeMap<usize, i64>> {
        let parent = self.root_paths();
        let to_root = |mut u: usize, sign: i64, chain: &mut BTreeMap<usize, i64>| {
            while let Some((p, e, s)) = parent[u] {
                // Tree edge e runs from p to u when s = 1.
                *chain.entry(e).or_insert(0) -= sign * s;
                u = p;
            }
        };
        self.generators()
            .into_iter()
            .map(|e| {
                let [a, b] = self.edge_ends[e];
                let mut chain = BTreeMap::new();
                chain.insert(e, 1);
                to_root(b, 1, &mut chain);
                to_root(a, -1, &mut chain);
                chain.retain(|_, v| *v != 0);
                chain
            })
            .collect()
    }
}

fn edge_label(e: &GraphEdge) -> String {
    let chart = |c: Chart| match c {
        Chart::Cell(t) => format!("t{t}"),
        Chart::Point(i) => format!("p{i}"),
        Chart::Overlap(t, i) => format!("t{t}p{i}"),
    };
    format!("{}>{}:{}", chart(e.from), chart(e.to), e.sheet)
}

/// First cohomology of a region with a basis of normalized cocycles.
#[derive(Clone, Debug)]
pub struct H1Cocycles<'r, 'a> {
    region: &'r Region<'a>,
    gens: Vec<usize>,
    gen_pos: HashMap<usize, usize>,
    kernel: KernelBasis,
}

impl<'r, 'a> H1Cocycles<'r, 'a> {
    /// The region.
    pub fn region(&self) -> &'r Region<'a> {
        self.region
    }

    /// Dimension (rank) of the cohomology group.
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// The coefficient ring.
    pub fn ring(&self) -> Ring {
        self.kernel.ring()
    }

    /// Basis cocycle `j` as values on the generators.
    pub fn basis_vector(&self, j: usize) -> Vec<BigInt> {
        self.kernel.basis_vector(j)
    }

    /// Coordinates of a cocycle given by its values on the generators.
    pub fn coordinates(&self, values: &[BigInt]) -> Result<Vec<BigInt>> {
        self.kernel.coordinates(values)
    }

    /// Position of a graph edge among the generators, if it is one.
    pub fn generator_position(&self, e: usize) -> Option<usize> {
        self.gen_pos.get(&e).copied()
    }

    /// Values of the cocycle with the given generator values on an
    /// arbitrary edge chain of the region.
    pub fn evaluate(&self, values: &[BigInt], chain: &BTreeMap<usize, i64>) -> BigInt {
        chain.iter().filter_map(|(e, &c)| self.gen_pos.get(e).map(|&i| &values[i] * c)).sum()
    }

    /// Expresses the fundamental cycles of this (sub)region's generators
    /// over the generators of a containing region.
    pub fn cycles_in(&self, sup: &H1Cocycles<'_, '_>) -> Result<Vec<Vec<BigInt>>> {
        let sub = self.region;
        sub.fundamental_cycles()
            .into_iter()
            .map(|chain| {
                let mut vec = vec![BigInt::zero(); sup.gens.len()];
                for (e, v) in chain {
                    let se = sup.region.edge(&sub.edges[e]).ok_or_else(|| {
                        Error::Inconsistent(format!("{} is not contained in {}", sub.name, sup.region.name))
                    })?;
                    if let Some(&i) = sup.gen_pos.get(&se) {
                        vec[i] += v;
                    }
                }
                Ok(vec)
            })
            .collect()
    }
}

fn reduce_ring(x: BigInt, ring: Ring) -> BigInt {
    match ring {
        Ring::Z => x,
        Ring::Z2 => {
            let two = BigInt::from(2);
            ((x % &two) + &two) % &two
        }
    }
}

/// The restriction map `H^1(sup) -> H^1(sub)` in the computed bases, with
/// rows indexed by the basis of `sub` and columns by the basis of `sup`.
///
/// Each basis cocycle of `sup` is pulled back along the fundamental cycles
/// of `sub` and expressed in the basis of `sub`; this fails when the pulled
/// back values are not a cocycle, which signals a region that is not a
/// subcomplex.
pub fn restriction(sup: &H1Cocycles<'_, '_>, sub: &H1Cocycles<'_, '_>) -> Result<SparseIntMatrix> {
    let ring = sub.ring();
    let cycles = sub.cycles_in(sup)?;
    let mut m = SparseIntMatrix::zeros(sub.dim(), sup.dim());
    for j in 0..sup.dim() {
        let phi = sup.basis_vector(j);
        let pulled: Vec<BigInt> =
            cycles.iter().map(|cv| reduce_ring(phi.iter().zip(cv).map(|(a, b)| a * b).sum(), ring)).collect();
        for (i, c) in sub.coordinates(&pulled)?.into_iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    Ok(m)
}

/// The map induced on presented first homology by a region inclusion.
#[derive(Clone, Debug)]
pub struct InclusionMap {
    /// Source region name.
    pub source: String,
    /// Target region name.
    pub target: String,
    /// Generator images, target generators by source generators.
    pub matrix: SparseIntMatrix,
}

/// Builds the inclusion map on first homology from `sub` into `sup` and
/// checks that it is well defined: the images of the relations of `sub`
/// lie in the integer span of the relations of `sup`.
pub fn inclusion_map(sub: &Region<'_>, sup: &Region<'_>) -> Result<InclusionMap> {
    let csub = sub.cohomology(Ring::Z2);
    let csup = sup.cohomology(Ring::Z2);
    let cycles = csub.cycles_in(&csup)?;
    let mut matrix = SparseIntMatrix::zeros(csup.gens.len(), csub.gens.len());
    for (j, col) in cycles.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                matrix.set(i, j, v.clone());
            }
        }
    }
    let map = InclusionMap { source: sub.name.clone(), target: sup.name.clone(), matrix };
    check_well_defined(&map, &sub.presentation(), &sup.presentation())?;
    Ok(map)
}

/// Checks that relation images lie in the integer span of the target
/// relations, by comparing the presented groups before and after adding
/// the images as extra relations.
pub fn check_well_defined(map: &InclusionMap, source: &H1Presentation, target: &H1Presentation) -> Result<()> {
    if map.matrix.cols() != source.generators() || map.matrix.rows() != target.generators() {
        return Err(Error::Shape("inclusion map does not match its presentations".into()));
    }
    let images = source.relations.mul(&map.matrix.transpose())?;
    let mut rows = target.relations.row_maps();
    rows.extend(images.row_maps());
    let extended = SparseIntMatrix::from_row_maps(target.generators(), &rows)?;
    if AbelianGroup::presented(&extended) != target.group() {
        return Err(Error::Inconsistent(format!(
            "relations of {} do not map into the relations of {}",
            map.source, map.target
        )));
    }
    Ok(())
}

/// The map on components induced by the inclusion of `sub` into `sup`,
/// checked on every node.
pub fn component_map(sub: &Region<'_>, sup: &Region<'_>) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; sub.component_count()];
    for (n, &(c, x)) in sub.nodes().iter().enumerate() {
        let target = sup
            .node(c, x)
            .ok_or_else(|| Error::Inconsistent(format!("{} is not contained in {}", sub.name(), sup.name())))?;
        let (from, to) = (sub.component_of(n), sup.component_of(target));
        if map[from] == usize::MAX {
            map[from] = to;
        } else if map[from] != to {
            return Err(Error::Inconsistent(format!(
                "a component of {} meets two components of {}",
                sub.name(),
                sup.name()
            )));
        }
    }
    Ok(map)
}

/// Cohomology of a region over the integers and over the two-element field.
///
/// The thickened regions have vanishing second homology, so second
/// cohomology is the Ext group of the torsion of first homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCohomology {
    /// Number of connected components.
    pub h0: usize,
    /// First integral cohomology.
    pub h1_z: AbelianGroup,
    /// Second integral cohomology.
    pub h2_z: AbelianGroup,
    /// First mod-2 cohomology dimension, from the mod-2 cochain complex.
    pub h1_z2: usize,
    /// Second mod-2 cohomology dimension, from mod-2 and rational ranks of
    /// the presentation.
    pub h2_z2: usize,
}

impl LocalCohomology {
    /// Universal-coefficient consistency between the integral groups and
    /// the independently computed mod-2 dimensions.
    pub fn uct_consistent(&self) -> bool {
        let even = self.h2_z.even_torsion_count();
        self.h2_z.free_rank == 0 && self.h1_z2 == self.h1_z.free_rank + even && self.h2_z2 == even
    }
}

/// Computes the local cohomology of a region.
///
/// Integral groups come from the Smith form of the presentation. The
/// first mod-2 dimension is computed directly from the mod-2 cochain
/// complex of the region and the second from mod-2 and rational ranks of
/// the presentation, so comparing them with the integral groups is a
/// genuine check.
pub fn local_cohomology(r: &Region<'_>) -> LocalCohomology {
    let pres = r.presentation();
    let h1 = pres.group();
    let d2 = r.boundary2();
    let rank1 = rank_mod2(&r.boundary1());
    let rank2 = rank_mod2(&d2);
    let n = pres.generators();
    let tensor_dim = n - rank_mod2(&pres.relations);
    let free = n - rank_rational(&pres.relations);
    LocalCohomology {
        h0: r.component_count(),
        h1_z: h1.hom_to_z(),
        h2_z: h1.ext_to_z(),
        h1_z2: r.edges.len() - rank2 - rank1,
        h2_z2: tensor_dim - free,
    }
}

fn charts_over(ls: &LocalSystem, cells: &[usize], points: &[LatticePoint4]) -> Vec<Chart> {
    let idx: Vec<usize> = points.iter().map(|p| ls.point(p)).collect();
    let mut out: Vec<Chart> = cells.iter().map(|&t| Chart::Cell(t)).collect();
    out.extend(idx.iter().map(|&i| Chart::Point(i)));
    for &t in cells {
        out.extend(idx.iter().map(|&i| Chart::Overlap(t, i)));
    }
    out
}

fn meridians_on(b: &BaseComplex, face: usize, vs: &[usize]) -> Vec<Meridian> {
    b.unit_edges_on(vs).into_iter().map(|[p, q]| Meridian { face, p, q }).collect()
}

/// The preimage of a 2-face element: the two cells through the face, the
/// face's lattice points, and every unit edge of the face as a meridian.
pub fn face_region(ls: &LocalSystem, f: usize) -> Region<'_> {
    let b = ls.base();
    let vs = b.faces()[f];
    let pieces = charts_over(ls, &b.cells_containing(&vs), &b.points_on(&vs));
    Region::new(ls, format!("face {f}"), pieces, meridians_on(b, f, &vs)).expect("face region is closed")
}

/// The preimage of an edge element: the three cells through the edge, the
/// edge's lattice points, the overlaps of every cell with the endpoint
/// vertex charts, and the unit edges of the edge as meridians in each of
/// its three faces.
pub fn edge_region(ls: &LocalSystem, e: usize) -> Region<'_> {
    let b = ls.base();
    let vs = b.edges()[e];
    let mut pieces = charts_over(ls, &b.cells_containing(&vs), &b.points_on(&vs));
    for &v in &vs {
        let iv = ls.point(&b.vertices()[v]);
        pieces.extend((0..5).filter(|&t| t != v).map(|t| Chart::Overlap(t, iv)));
    }
    let meridians = (0..b.faces().len())
        .filter(|&f| vs.iter().all(|v| b.faces()[f].contains(v)))
        .flat_map(|f| meridians_on(b, f, &vs))
        .collect();
    Region::new(ls, format!("edge {e}"), pieces, meridians).expect("edge region is closed")
}

/// The intersection of an edge element with a face element through it.
pub fn pair_region(ls: &LocalSystem, e: usize, f: usize) -> Result<Region<'_>> {
    let b = ls.base();
    let (ev, fv) = (b.edges()[e], b.faces()[f]);
    if !ev.iter().all(|v| fv.contains(v)) {
        return Err(Error::NotIncident(format!("edge {e} is not an edge of face {f}")));
    }
    let pieces = charts_over(ls, &b.cells_containing(&fv), &b.points_on(&ev));
    Region::new(ls, format!("edge {e} / face {f}"), pieces, meridians_on(b, f, &ev))
}

/// The preimage of a cell element: the cell and its overlaps with every
/// boundary point it contains.
pub fn cell_region(ls: &LocalSystem, t: usize) -> Region<'_> {
    let b = ls.base();
    let mut pieces = vec![Chart::Cell(t)];
    pieces.extend(b.boundary_points().iter().filter(|p| b.in_cell(p, t)).map(|p| Chart::Overlap(t, ls.point(p))));
    Region::new(ls, format!("cell {t}"), pieces, Vec::new()).expect("cell region is closed")
}

/// Interior lattice points of a 2-face, which are the hexagon centers, in
/// the order of the discriminant graph's hexagons.
pub fn hexagon_centers(ls: &LocalSystem, f: usize) -> Vec<LatticePoint4> {
    let g = crate::base_complex::build_discriminant(ls.base());
    g.hexagons.iter().filter(|h| h.face == f).map(|h| h.center).collect()
}

fn hexagon_points(ls: &LocalSystem, f: usize, center: &LatticePoint4) -> Vec<LatticePoint4> {
    let b = ls.base();
    let mut pts = vec![*center];
    for [p, q] in b.unit_edges_on(&b.faces()[f]) {
        if p == *center {
            pts.push(q);
        } else if q == *center {
            pts.push(p);
        }
    }
    pts
}

/// The preimage of a closed hexagon around an interior point of a 2-face:
/// the point, its six neighbours, the two cells, and the unit edges among
/// these seven points as meridians.
pub fn hexagon_region<'a>(ls: &'a LocalSystem, f: usize, center: &LatticePoint4) -> Result<Region<'a>> {
    hexagon_union_of(ls, f, std::slice::from_ref(center), format!("hexagon {center:?} of face {f}"))
}

/// The union of the first `k` hexagon regions of a 2-face.
pub fn hexagon_union(ls: &LocalSystem, f: usize, k: usize) -> Result<Region<'_>> {
    let centers = hexagon_centers(ls, f);
    if k == 0 || k > centers.len() {
        return Err(Error::Shape(format!("face {f} has {} hexagons, asked for {k}", centers.len())));
    }
    hexagon_union_of(ls, f, &centers[..k], format!("union of {k} hexagons of face {f}"))
}

fn hexagon_union_of<'a>(ls: &'a LocalSystem, f: usize, centers: &[LatticePoint4], name: String) -> Result<Region<'a>> {
    let b = ls.base();
    let fv = b.faces()[f];
    let mut pts: Vec<LatticePoint4> = centers.iter().flat_map(|c| hexagon_points(ls, f, c)).collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 7 * centers.len().min(1) {
        return Err(Error::Shape("hexagon center is not interior".into()));
    }
    let meridians = b
        .unit_edges_on(&fv)
        .into_iter()
        .filter(|[p, q]| pts.contains(p) && pts.contains(q))
        .map(|[p, q]| Meridian { face: f, p, q })
        .collect();
    Region::new(ls, name, charts_over(ls, &b.cells_containing(&fv), &pts), meridians)
}

/// The coarse model: every cell, every vertex chart, their overlaps, and
/// for every 2-face the three meridian legs between its vertices.
pub fn coarse_region(ls: &LocalSystem) -> Region<'_> {
    let b = ls.base();
    let verts: Vec<usize> = (0..5).map(|v| ls.point(&b.vertices()[v])).collect();
    let mut pieces: Vec<Chart> = (0..5).map(Chart::Cell).collect();
    pieces.extend(verts.iter().map(|&i| Chart::Point(i)));
    for t in 0..5 {
        for v in (0..5).filter(|&v| v != t) {
            pieces.push(Chart::Overlap(t, verts[v]));
        }
    }
    let mut meridians = Vec::new();
    for (f, fv) in b.faces().iter().enumerate() {
        for (a, c) in [(fv[0], fv[1]), (fv[0], fv[2]), (fv[1], fv[2])] {
            meridians.push(Meridian { face: f, p: b.vertices()[a], q: b.vertices()[c] });
        }
    }
    Region::new(ls, "coarse model", pieces, meridians).expect("coarse region is closed")
}

/// The global model: every chart of the local system and every unit edge
/// of every 2-face as a meridian.
pub fn global_region(ls: &LocalSystem) -> Region<'_> {
    let b = ls.base();
    let mut pieces: Vec<Chart> = (0..5).map(Chart::Cell).collect();
    for (i, p) in b.boundary_points().iter().enumerate() {
        pieces.push(Chart::Point(i));
        pieces.extend((0..5).filter(|&t| b.in_cell(p, t)).map(|t| Chart::Overlap(t, i)));
    }
    let meridians = (0..b.faces().len()).flat_map(|f| meridians_on(b, f, &b.faces()[f])).collect();
    Region::new(ls, "global model", pieces, meridians).expect("global region is closed")
}

/// The region of a nerve simplex.
///
/// Single elements and incident edge-face pairs use their full models with
/// meridians. Several edges through a vertex `v` give the vertex chart of
/// `v` with its overlaps (only the overlap with the cell when a cell is
/// present). Other simplices containing a cell give that cell with its
/// overlaps over the edge, or over the face when there is no edge.
pub fn simplex_region<'a>(ls: &'a LocalSystem, s: &NerveSimplex) -> Result<Region<'a>> {
    let b = ls.base();
    let (es, fs, cs) = (s.edges(), s.faces(), s.cells());
    let name = format!("{:?}", s.0);
    if es.len() >= 2 {
        let v = (0..5)
            .find(|v| es.iter().all(|&e| b.edges()[e].contains(v)))
            .ok_or_else(|| Error::NotIncident(format!("edges of {name} share no vertex")))?;
        let iv = ls.point(&b.vertices()[v]);
        if let Some(&c) = cs.first() {
            return Region::new(ls, name, vec![Chart::Overlap(c, iv)], Vec::new());
        }
        let ts = match fs.first() {
            Some(&f) => b.cells_containing(&b.faces()[f]),
            None => (0..5).filter(|&t| t != v).collect(),
        };
        let mut pieces = vec![Chart::Point(iv)];
        pieces.extend(ts.into_iter().map(|t| Chart::Overlap(t, iv)));
        return Region::new(ls, name, pieces, Vec::new());
    }
    match (es.as_slice(), fs.as_slice(), cs.as_slice()) {
        ([e], [], []) => Ok(edge_region(ls, *e)),
        ([], [f], []) => Ok(face_region(ls, *f)),
        ([], [], [t]) => Ok(cell_region(ls, *t)),
        ([e], [f], []) => pair_region(ls, *e, *f),
        (_, _, [t]) => {
            let vs: Vec<usize> = match (es.first(), fs.first()) {
                (Some(&e), _) => b.edges()[e].to_vec(),
                (None, Some(&f)) => b.faces()[f].to_vec(),
                (None, None) => unreachable!("single cells are handled above"),
            };
            let mut pieces = vec![Chart::Cell(*t)];
            pieces.extend(b.points_on(&vs).iter().map(|p| Chart::Overlap(*t, ls.point(p))));
            Region::new(ls, name, pieces, Vec::new())
        }
        _ => Err(Error::NotIncident(format!("{name} is not a nerve simplex"))),
    }
}

/// The matrix printed for the hexagon piece: rows are the images of seven
/// boundary classes in a basis of four.
pub const HEXAGON_MATRIX_A: [[i64; 4]; 7] =
    [[1, 1, 1, 1], [0, 1, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]];

/// The hexagon piece presented by the six arc classes `v_1..v_6` subject
/// to the relations read off the last three columns of the matrix `A`
/// after discarding the first generator's row.
pub fn hexagon_presentation() -> H1Presentation {
    let mut rows = Vec::new();
    for col in 1..4 {
        let row: Vec<i64> = HEXAGON_MATRIX_A[1..].iter().map(|r| r[col]).collect();
        rows.push(row);
    }
    H1Presentation {
        labels: (1..=6).map(|i| format!("v{i}")).collect(),
        relations: SparseIntMatrix::from_dense(6, &rows).expect("3x6 relation matrix"),
    }
}

/// Generators of the torsion subgroup of a presented group, as
/// coefficient vectors on the generators together with their orders.
///
/// With `U R V = D` the Smith form of the relation matrix `R`, row `i` of
/// `U R` equals `d_i` times a primitive vector whose class has order `d_i`.
pub fn torsion_classes(pres: &H1Presentation) -> Vec<(Vec<BigInt>, BigInt)> {
    let snf = crate::exact_linalg::smith_normal_form(&pres.relations);
    let ur = SparseIntMatrix::from_dense_big(pres.relations.rows(), &snf.u)
        .and_then(|u| u.mul(&pres.relations))
        .expect("shapes agree")
        .to_dense();
    snf.invariant_factors
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > BigInt::from(1))
        .map(|(i, d)| (ur[i].iter().map(|x| x / d).collect(), d.clone()))
        .collect()
}

/// Order of a class in a presented group, or `None` for infinite order.
///
/// The class is given by coefficients on the generators.
pub fn class_order(pres: &H1Presentation, class: &[i64]) -> Option<u64> {
    let n = pres.generators();
    let rows: Vec<Vec<i64>> = pres
        .relations
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().expect("small relation entries")).collect())
        .collect();
    let base = AbelianGroup::presented(&pres.relations);
    for k in 1..=64u64 {
        let mut extended = rows.clone();
        extended.push(class.iter().map(|&c| c * k as i64).collect());
        let m = SparseIntMatrix::from_dense(n, &extended).expect("rectangular");
        if AbelianGroup::presented(&m) == base {
            return Some(k);
        }
    }
    None
}
