//! Abelianized fundamental group of the branched cover from a Heegaard
//! splitting of the coarse spine.
//!
//! The coarse spine is the bipartite graph whose nodes are the five cell
//! charts and the five vertex charts, joined through their twenty
//! overlaps. It splits into two star trees `A = {v0, t1..t4}` and
//! `B = {t0, v1..v4}` joined by twelve crossing edges. Contracting the
//! trees gives a two-vertex graph whose sevenfold cover has 14 vertices and
//! 84 edges. Meridian disks of 24 of the 30 legs of the discriminant graph
//! (each leg joins a face center to the midpoint of one of its edges) lift
//! to 120 relations on the 71 non-tree edges of a spanning tree of the
//! cover. The six uncut legs must form a forest downstairs and upstairs so
//! that their disks are redundant.
//!
//! The computation uses only sheet transports of the local system, so it
//! is independent of the Cech machinery.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{AbelianGroup, SparseIntMatrix};
use crate::local_models::{component_map, edge_region, face_region, pair_region};
use crate::monodromy::{Chart, LocalSystem, SHEETS};

/// Which sheet transports the oracle uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Monodromy {
    /// The local system's transports.
    Quintic,
    /// Every transport preserves the sheet's position, giving seven copies
    /// of the base.
    Trivial,
}

/// A leg of the discriminant graph: the segment in face `face` from its
/// center to the midpoint of the edge joining polytope vertices `v < w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Leg {
    /// 2-face index.
    pub face: usize,
    /// First endpoint of the edge.
    pub v: usize,
    /// Second endpoint of the edge.
    pub w: usize,
}

/// All 30 legs in face order.
pub fn legs(ls: &LocalSystem) -> Vec<Leg> {
    let mut out = Vec::new();
    for (face, fv) in ls.base().faces().iter().enumerate() {
        for (v, w) in [(fv[0], fv[1]), (fv[0], fv[2]), (fv[1], fv[2])] {
            out.push(Leg { face, v: v.min(w), w: v.max(w) });
        }
    }
    out
}

/// An edge of the contracted two-vertex graph: cell `t` in tree `A` joined
/// to vertex `v` in tree `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Crossing {
    /// Cell, in `1..5`.
    pub t: usize,
    /// Polytope vertex, in `1..5` and different from `t`.
    pub v: usize,
}

/// The twelve crossing edges.
pub fn crossings() -> Vec<Crossing> {
    (1..5).flat_map(|t| (1..5).filter(move |&v| v != t).map(move |v| Crossing { t, v })).collect()
}

fn is_tree_edge(t: usize, v: usize) -> bool {
    v == 0 || t == 0
}

/// The seeded choices of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegaardChoice {
    /// Seed the choices were drawn from.
    pub seed: u64,
    /// Legs whose disks are omitted.
    pub uncut: Vec<Leg>,
    /// Covering-graph edges in the spanning tree.
    pub tree: Vec<usize>,
    /// Sign applied to each generator.
    pub orientation: Vec<i8>,
}

/// Result of one run of the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegaardReport {
    /// Monodromy used.
    pub monodromy: Monodromy,
    /// Choices made.
    pub choice: HeegaardChoice,
    /// Vertices of the covering graph.
    pub covering_vertices: usize,
    /// Edges of the covering graph.
    pub covering_edges: usize,
    /// Connected components of the covering graph.
    pub covering_components: usize,
    /// Rows of the relation matrix.
    pub relations: usize,
    /// Columns of the relation matrix.
    pub generators: usize,
    /// Cokernel of the relation matrix.
    pub h1: AbelianGroup,
    /// Cokernel when the disks of all 30 legs are kept.
    pub h1_all_legs: AbelianGroup,
    /// Whether every lifted meridian crosses between the two trees an even
    /// number of times.
    pub even_crossings: bool,
    /// The relation matrix, one row per lifted meridian of a cut leg.
    #[serde(skip)]
    pub relation_matrix: SparseIntMatrix,
}

/// The covering graph of the contracted spine and the lifting machinery.
pub struct HeegaardOracle<'a> {
    ls: &'a LocalSystem,
    monodromy: Monodromy,
    vertex_charts: [usize; 5],
    /// For each crossing, the `B` sheet reached from each `A` sheet.
    permutations: Vec<[usize; SHEETS]>,
}

impl<'a> HeegaardOracle<'a> {
    /// Builds the covering graph.
    pub fn new(ls: &'a LocalSystem, monodromy: Monodromy) -> Result<Self> {
        let b = ls.base();
        let vertex_charts = std::array::from_fn(|v| ls.point(&b.vertices()[v]));
        let mut oracle = Self { ls, monodromy, vertex_charts, permutations: Vec::new() };
        oracle.permutations = crossings()
            .iter()
            .map(|c| {
                let mut perm = [0; SHEETS];
                for (x, slot) in perm.iter_mut().enumerate() {
                    let y = oracle.a_to_cell(c.t, x)?;
                    *slot = oracle.cell_to_b(c.t, c.v, y)?;
                }
                Ok(perm)
            })
            .collect::<Result<_>>()?;
        Ok(oracle)
    }

    /// Moves sheet position `x` from chart `src` to the adjacent chart
    /// `dst`.
    fn step(&self, src: Chart, dst: Chart, x: usize) -> Result<usize> {
        match self.monodromy {
            Monodromy::Trivial => Ok(x),
            Monodromy::Quintic => {
                let sheet = self.ls.sheets(src)[x];
                let y = self.ls.transport(src, dst, sheet)?;
                self.ls
                    .sheets(dst)
                    .iter()
                    .position(|&s| s == y)
                    .ok_or_else(|| Error::Inconsistent(format!("sheet {y} missing over {dst:?}")))
            }
        }
    }

    fn through(&self, walk: &[Chart], x: usize) -> Result<usize> {
        walk.windows(2).try_fold(x, |x, w| self.step(w[0], w[1], x))
    }

    fn cell_vertex_walk(&self, t: usize, v: usize) -> [Chart; 3] {
        let p = self.vertex_charts[v];
        [Chart::Cell(t), Chart::Overlap(t, p), Chart::Point(p)]
    }

    /// Sheet over cell `t` reached from `A` sheet `x` along the tree.
    fn a_to_cell(&self, t: usize, x: usize) -> Result<usize> {
        let mut w = self.cell_vertex_walk(t, 0);
        w.reverse();
        self.through(&w, x)
    }

    /// `A` sheet reached from sheet `y` over cell `t` along the tree.
    fn cell_to_a(&self, t: usize, y: usize) -> Result<usize> {
        self.through(&self.cell_vertex_walk(t, 0), y)
    }

    /// `B` sheet reached from sheet `y` over cell `t` through vertex `v`.
    fn cell_to_b(&self, t: usize, v: usize, y: usize) -> Result<usize> {
        let there = self.through(&self.cell_vertex_walk(t, v), y)?;
        let mut back = self.cell_vertex_walk(0, v);
        back.reverse();
        self.through(&back, there)
    }

    /// Number of vertices of the covering graph.
    pub fn vertex_count(&self) -> usize {
        2 * SHEETS
    }

    /// Covering-graph edge `(crossing, A sheet)` as a flat index.
    fn edge_index(&self, crossing: usize, x: usize) -> usize {
        crossing * SHEETS + x
    }

    /// Endpoints of every covering-graph edge; `A` sheets are vertices
    /// `0..7` and `B` sheets `7..14`.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.permutations.iter().flat_map(|perm| perm.iter().enumerate().map(|(x, &y)| [x, SHEETS + y])).collect()
    }

    /// The crossing permutations, one per crossing edge in the order of
    /// [`crossings`].
    pub fn permutations(&self) -> &[[usize; SHEETS]] {
        &self.permutations
    }

    /// Lifts the meridian of a leg: one closed chain of covering-graph
    /// edges per sheet orbit, each paired with the number of times it
    /// crosses between the trees.
    pub fn lift_leg(&self, leg: &Leg) -> Result<Vec<(BTreeMap<usize, i64>, usize)>> {
        let b = self.ls.base();
        let cells = b.cells_containing(&b.faces()[leg.face]);
        let (t, t2) = (cells[0], cells[1]);
        let (p, q) = (self.vertex_charts[leg.v], self.vertex_charts[leg.w]);
        let walk = [
            Chart::Cell(t),
            Chart::Overlap(t, p),
            Chart::Point(p),
            Chart::Overlap(t2, p),
            Chart::Cell(t2),
            Chart::Overlap(t2, q),
            Chart::Point(q),
            Chart::Overlap(t, q),
            Chart::Cell(t),
        ];
        let mut seen = [false; SHEETS];
        let mut out = Vec::new();
        for start in 0..SHEETS {
            if seen[start] {
                continue;
            }
            let mut chain = BTreeMap::new();
            let mut crossings_seen = 0;
            let mut x = start;
            loop {
                seen[x] = true;
                for w in walk.windows(2) {
                    let y = self.step(w[0], w[1], x)?;
                    if let Chart::Overlap(tc, pc) = w[1] {
                        let v = self.vertex_charts.iter().position(|&c| c == pc).expect("vertex chart");
                        if !is_tree_edge(tc, v) {
                            // Entering the overlap from the cell side goes from A to B.
                            let (cell_sheet, sign) = if matches!(w[0], Chart::Cell(_)) { (x, 1) } else { (y, -1) };
                            let ci = crossings().iter().position(|c| *c == Crossing { t: tc, v }).expect("crossing");
                            let a = self.cell_to_a(tc, cell_sheet)?;
                            *chain.entry(self.edge_index(ci, a)).or_insert(0) += sign;
                            crossings_seen += 1;
                        }
                    }
                    x = y;
                }
                if x == start {
                    break;
                }
            }
            chain.retain(|_, v| *v != 0);
            out.push((chain, crossings_seen));
        }
        Ok(out)
    }

    /// Picks a spanning forest of the covering graph by randomized
    /// Kruskal.
    fn spanning_forest(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, usize) {
        let edges = self.edges();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(rng);
        let mut uf = UnionFind::new(self.vertex_count());
        let mut tree: Vec<usize> = order.into_iter().filter(|&e| uf.union(edges[e][0], edges[e][1])).collect();
        tree.sort_unstable();
        (tree, uf.count())
    }

    /// Runs the oracle with choices drawn from `seed`.
    pub fn run(&self, seed: u64) -> Result<HeegaardReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let uncut = choose_uncut_legs(self.ls, &mut rng)?;
        let (tree, components) = self.spanning_forest(&mut rng);
        let n_edges = self.permutations.len() * SHEETS;
        let generators: Vec<usize> = (0..n_edges).filter(|e| tree.binary_search(e).is_err()).collect();
        let orientation: Vec<i8> = generators.iter().map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let column: BTreeMap<usize, usize> = generators.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let all = legs(self.ls);
        let mut cut_rows = Vec::new();
        let mut all_rows = Vec::new();
        let mut even = true;
        for leg in &all {
            for (chain, crossed) in self.lift_leg(leg)? {
                even &= crossed % 2 == 0;
                let row: BTreeMap<usize, BigInt> = chain
                    .iter()
                    .filter_map(|(e, &c)| column.get(e).map(|&i| (i, BigInt::from(c * i64::from(orientation[i])))))
                    .collect();
                if !uncut.contains(leg) {
                    cut_rows.push(row.clone());
                }
                all_rows.push(row);
            }
        }
        let cut = SparseIntMatrix::from_row_maps(generators.len(), &cut_rows)?;
        let full = SparseIntMatrix::from_row_maps(generators.len(), &all_rows)?;
        Ok(HeegaardReport {
            monodromy: self.monodromy,
            choice: HeegaardChoice { seed, uncut, tree, orientation },
            covering_vertices: self.vertex_count(),
            covering_edges: n_edges,
            covering_components: components,
            relations: cut.rows(),
            generators: generators.len(),
            h1: AbelianGroup::presented(&cut),
            h1_all_legs: AbelianGroup::presented(&full),
            even_crossings: even,
            relation_matrix: cut,
        })
    }
}

/// Runs the oracle once per seed and checks that all runs agree.
pub fn stable_h1(ls: &LocalSystem, seeds: &[u64]) -> Result<(AbelianGroup, Vec<HeegaardReport>)> {
    use rayon::prelude::*;
    let oracle = HeegaardOracle::new(ls, Monodromy::Quintic)?;
    let reports = seeds.par_iter().map(|&s| oracle.run(s)).collect::<Result<Vec<_>>>()?;
    let first = reports.first().map(|r| r.h1.clone()).ok_or_else(|| Error::Inconsistent("no seeds given".into()))?;
    for r in &reports {
        if r.h1 != first || r.h1_all_legs != first {
            return Err(Error::Inconsistent(format!("seed {} gives {} instead of {first}", r.choice.seed, r.h1)));
        }
    }
    Ok((first, reports))
}

/// Picks six legs to leave uncut so that they form a forest in the
/// discriminant graph and their lifts form a forest among the components
/// over its vertices.
pub fn choose_uncut_legs(ls: &LocalSystem, rng: &mut ChaCha8Rng) -> Result<Vec<Leg>> {
    let b = ls.base();
    let n_faces = b.faces().len();
    let mut order = legs(ls);
    order.shuffle(rng);
    // Downstairs vertices: faces, then edges. Upstairs vertices: the
    // components over each, offset per vertex.
    let mut up_offset = Vec::new();
    let mut total = 0;
    for f in 0..n_faces {
        up_offset.push(total);
        total += face_region(ls, f).component_count();
    }
    for e in 0..b.edges().len() {
        up_offset.push(total);
        total += edge_region(ls, e).component_count();
    }
    let mut down = UnionFind::new(n_faces + b.edges().len());
    let mut up = UnionFind::new(total);
    let mut uncut = Vec::new();
    for leg in order {
        if uncut.len() == 6 {
            break;
        }
        let e = b.edge_index(leg.v, leg.w);
        let (fv, ev) = (leg.face, n_faces + e);
        if down.find(fv) == down.find(ev) {
            continue;
        }
        let pair = pair_region(ls, e, leg.face)?;
        let to_face = component_map(&pair, &face_region(ls, leg.face))?;
        let to_edge = component_map(&pair, &edge_region(ls, e))?;
        let mut trial = up.clone();
        let acyclic = to_face.iter().zip(&to_edge).all(|(&a, &c)| trial.union(up_offset[fv] + a, up_offset[ev] + c));
        if acyclic {
            up = trial;
            down.union(fv, ev);
            uncut.push(leg);
        }
    }
    if uncut.len() < 6 {
        return Err(Error::Inconsistent(format!("only {} legs can be left uncut", uncut.len())));
    }
    uncut.sort();
    Ok(uncut)
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), count: n }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Joins the classes of `a` and `b`; false when they were already
    /// joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.count -= 1;
        true
    }

    fn count(&self) -> usize {
        self.count
    }
}
