//! Sheet permutations of the seven-sheeted branched cover and the local
//! system that produces them.
//!
//! Sheets over a chart are the nonzero two-torsion points of the fibre
//! torus, written as vectors of `F_2^4`. Over a 3-cell `t` the fibre is
//! `M_R / Z m_t` with `m_t` the cell normal, so its two-torsion points are
//! the vectors `x` with `<x, m_t> = 0 mod 2`. Over a lattice point `p` the
//! fibre is `N_R / Z p`, whose two-torsion points are the cosets of
//! `F_2^4 / <p>`, represented canonically by clearing the highest set bit of
//! `p`. An overlap of a cell with a point chart uses the cell's sheets.
//!
//! Walking once around a discriminant segment visits two cells and the two
//! lattice points at the ends of the dual unit edge; the resulting
//! permutation of sheets is the local monodromy.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::base_complex::{add, chart_vertex, enclosed_branches, BaseComplex, Branch, NerveSimplex};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint4;

/// Number of sheets of the cover.
pub const SHEETS: usize = 7;

/// A permutation of the sheet labels `1..=7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SheetPermutation {
    images: [u8; SHEETS],
}

impl SheetPermutation {
    /// The identity.
    pub fn identity() -> Self {
        Self { images: [1, 2, 3, 4, 5, 6, 7] }
    }

    /// Builds a permutation from the images of `1..=7`.
    pub fn from_images(images: [u8; SHEETS]) -> Result<Self> {
        let mut seen = [false; SHEETS];
        for &x in &images {
            if !(1..=SHEETS as u8).contains(&x) || seen[x as usize - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation of 1..7")));
            }
            seen[x as usize - 1] = true;
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `(12)(67)`, `(1 2)(6 7)` or `()`.
    ///
    /// Labels are single digits unless separated by whitespace or commas.
    /// A label may not appear twice.
    pub fn parse(text: &str) -> Result<Self> {
        let mut images = [1, 2, 3, 4, 5, 6, 7];
        let mut used = [false; SHEETS];
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = body_start.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &body_start[..close];
            rest = body_start[close + 1..].trim_start();
            let labels = parse_cycle_labels(body)?;
            for &x in &labels {
                if used[x as usize - 1] {
                    return Err(Error::Parse(format!("label {x} repeated in {s:?}")));
                }
                used[x as usize - 1] = true;
            }
            for (i, &x) in labels.iter().enumerate() {
                images[x as usize - 1] = labels[(i + 1) % labels.len()];
            }
        }
        Ok(Self { images })
    }

    /// Image of a label.
    pub fn apply(&self, x: u8) -> u8 {
        self.images[x as usize - 1]
    }

    /// Images of `1..=7`.
    pub fn images(&self) -> [u8; SHEETS] {
        self.images
    }

    /// The composite `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut images = [0; SHEETS];
        for (i, img) in images.iter_mut().enumerate() {
            *img = self.apply(other.apply(i as u8 + 1));
        }
        Self { images }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Self {
        let mut images = [0; SHEETS];
        for i in 0..SHEETS {
            images[self.images[i] as usize - 1] = i as u8 + 1;
        }
        Self { images }
    }

    /// True when the permutation squares to the identity.
    pub fn is_involution(&self) -> bool {
        self.compose(self) == Self::identity()
    }

    /// Labels left fixed.
    pub fn fixed_points(&self) -> Vec<u8> {
        (1..=SHEETS as u8).filter(|&x| self.apply(x) == x).collect()
    }

    /// Disjoint cycles of length at least two, each starting at its
    /// smallest label, sorted.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; SHEETS];
        let mut out = Vec::new();
        for start in 1..=SHEETS as u8 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start as usize - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize - 1] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// True for a product of two disjoint transpositions.
    pub fn is_double_transposition(&self) -> bool {
        let c = self.cycles();
        c.len() == 2 && c.iter().all(|x| x.len() == 2)
    }
}

fn parse_cycle_labels(body: &str) -> Result<Vec<u8>> {
    let tokens: Vec<&str> = if body.contains(|c: char| c.is_whitespace() || c == ',') {
        body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect()
    } else {
        body.char_indices().map(|(i, c)| &body[i..i + c.len_utf8()]).collect()
    };
    let mut labels = Vec::new();
    for t in tokens {
        let x: u8 = t.parse().map_err(|_| Error::Parse(format!("bad sheet label {t:?}")))?;
        if !(1..=SHEETS as u8).contains(&x) {
            return Err(Error::Parse(format!("sheet label {x} outside 1..7")));
        }
        if labels.contains(&x) {
            return Err(Error::Parse(format!("label {x} repeated within a cycle")));
        }
        labels.push(x);
    }
    Ok(labels)
}

impl fmt::Display for SheetPermutation {
    /// Cycle notation with single-digit labels; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.cycles();
        if c.is_empty() {
            return write!(f, "()");
        }
        for cyc in c {
            write!(f, "(")?;
            for x in cyc {
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for SheetPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A partition of the sheet labels `1..=7`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitPartition {
    blocks: Vec<Vec<u8>>,
}

impl OrbitPartition {
    /// Builds a partition from blocks, checking that they are disjoint and
    /// cover `1..=7`. Blocks are sorted internally and by their minima.
    pub fn new(blocks: Vec<Vec<u8>>) -> Result<Self> {
        let mut seen = [false; SHEETS];
        let mut out = Vec::new();
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            b.sort_unstable();
            for &x in &b {
                if !(1..=SHEETS as u8).contains(&x) || seen[x as usize - 1] {
                    return Err(Error::Parse(format!("label {x} repeated or out of range")));
                }
                seen[x as usize - 1] = true;
            }
            out.push(b);
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Parse("blocks do not cover all sheets".into()));
        }
        out.sort();
        Ok(Self { blocks: out })
    }

    /// Blocks, each sorted, ordered by minimum.
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// Always false; a partition of seven labels has a block.
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block sizes in descending order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Index of the block containing a label.
    pub fn block_of(&self, x: u8) -> usize {
        self.blocks.iter().position(|b| b.contains(&x)).expect("partition covers all labels")
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.block_of(x) == other.block_of(b[0])))
    }
}

/// Orbits of the group generated by `gens` acting on `1..=7`, computed by
/// breadth-first saturation.
pub fn orbits(gens: &[SheetPermutation]) -> OrbitPartition {
    let mut block = [usize::MAX; SHEETS];
    let mut blocks = Vec::new();
    for start in 1..=SHEETS as u8 {
        if block[start as usize - 1] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        block[start as usize - 1] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for g in gens {
                let y = g.apply(x);
                if block[y as usize - 1] == usize::MAX {
                    block[y as usize - 1] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        blocks.push(members);
    }
    OrbitPartition::new(blocks).expect("orbits partition the sheets")
}

/// Key of a table entry `T_{ij,k}`: the face through the chart vertex and
/// its `i`-th and `j`-th neighbours, and the edge to the `k`-th neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TableKey {
    /// First neighbour index, `1..=4`.
    pub i: u8,
    /// Second neighbour index, `i < j <= 4`.
    pub j: u8,
    /// Edge neighbour index, equal to `i` or `j`.
    pub k: u8,
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T_{}{},{}", self.i, self.j, self.k)
    }
}

/// The twelve local monodromies at a vertex chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTable {
    entries: BTreeMap<TableKey, SheetPermutation>,
}

impl MonodromyTable {
    /// Builds a table from entries, checking that the keys are exactly the
    /// twelve `(i, j, k)` with `i < j` and `k` in `{i, j}`.
    pub fn new(entries: BTreeMap<TableKey, SheetPermutation>) -> Result<Self> {
        let expected = table_keys();
        if entries.keys().copied().collect::<Vec<_>>() != expected {
            return Err(Error::Parse("table keys must be T_ij,k with i < j and k in {i, j}".into()));
        }
        Ok(Self { entries })
    }

    /// Entry lookup.
    pub fn get(&self, key: TableKey) -> SheetPermutation {
        self.entries[&key]
    }

    /// Entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (TableKey, SheetPermutation)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True for a table without entries, which cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The twelve table keys in order.
pub fn table_keys() -> Vec<TableKey> {
    let mut out = Vec::new();
    for i in 1..=4u8 {
        for j in i + 1..=4 {
            out.push(TableKey { i, j, k: i });
            out.push(TableKey { i, j, k: j });
        }
    }
    out
}

const QUINTIC_TABLE: [(u8, u8, u8, &str); 12] = [
    (1, 2, 1, "(12)(67)"),
    (1, 2, 2, "(16)(27)"),
    (1, 3, 1, "(45)(67)"),
    (1, 3, 3, "(47)(56)"),
    (1, 4, 1, "(12)(45)"),
    (1, 4, 4, "(14)(25)"),
    (2, 3, 2, "(34)(27)"),
    (2, 3, 3, "(23)(47)"),
    (2, 4, 2, "(16)(34)"),
    (2, 4, 4, "(14)(36)"),
    (3, 4, 3, "(23)(56)"),
    (3, 4, 4, "(25)(36)"),
];

/// The published local monodromy table of the quintic.
///
/// The same table holds in every vertex chart under the labelling of
/// [`LocalSystem::vertex_label`]; [`LocalSystem::derived_table`] recomputes
/// it from the local system.
pub fn quintic_monodromy_table() -> MonodromyTable {
    let entries = QUINTIC_TABLE
        .iter()
        .map(|&(i, j, k, s)| (TableKey { i, j, k }, SheetPermutation::parse(s).expect("table entry parses")))
        .collect();
    MonodromyTable::new(entries).expect("table keys are complete")
}

/// Label vectors `u_1..u_7` in the basis of unit steps from a chart vertex
/// to its first three neighbours.
pub const SHEET_VECTORS: [[u8; 3]; SHEETS] =
    [[0, 0, 1], [1, 0, 1], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 1, 1], [1, 1, 1]];

/// A chart of the local system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Chart {
    /// Interior of 3-cell `t`.
    Cell(usize),
    /// Neighbourhood of a boundary lattice point, by index into
    /// [`BaseComplex::boundary_points`].
    Point(usize),
    /// Overlap of cell `t` with the point chart of the given index.
    Overlap(usize, usize),
}

/// Reduction of a vector of `Z^4` modulo two, as a bitmask.
pub fn bits(x: &LatticePoint4) -> u8 {
    x.iter().enumerate().fold(0u8, |acc, (i, &v)| acc | ((v.rem_euclid(2) as u8) << i))
}

/// Canonical representative of `x` in `F_2^4 / <p>`.
pub fn reduce(x: u8, p: u8) -> u8 {
    if p == 0 {
        return x;
    }
    let h = 7 - p.leading_zeros() as u8;
    if (x >> h) & 1 == 1 {
        x ^ p
    } else {
        x
    }
}

fn parity(a: u8, b: u8) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// The mod-2 local system of fibre two-torsion points over the base.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    base: BaseComplex,
    cell_bits: Vec<u8>,
    point_bits: Vec<u8>,
    point_index: BTreeMap<LatticePoint4, usize>,
}

impl LocalSystem {
    /// Builds the local system over a base complex. Every boundary point
    /// must be primitive modulo two, which holds for reflexive simplices
    /// whose vertices are not divisible by two.
    pub fn new(base: &BaseComplex) -> Result<Self> {
        let cell_bits: Vec<u8> = (0..base.cells().len()).map(|t| bits(&base.cell_normal(t))).collect();
        let point_bits: Vec<u8> = base.boundary_points().iter().map(bits).collect();
        if cell_bits.iter().chain(&point_bits).any(|&b| b == 0) {
            return Err(Error::Unsupported("a normal or lattice point vanishes modulo two".into()));
        }
        let point_index = base.boundary_points().iter().enumerate().map(|(i, p)| (*p, i)).collect();
        Ok(Self { base: base.clone(), cell_bits, point_bits, point_index })
    }

    /// The local system of the quintic.
    pub fn quintic() -> Self {
        Self::new(&BaseComplex::quintic()).expect("quintic local system")
    }

    /// The underlying base complex.
    pub fn base(&self) -> &BaseComplex {
        &self.base
    }

    /// Index of a boundary lattice point.
    pub fn point(&self, p: &LatticePoint4) -> usize {
        self.point_index[p]
    }

    /// Sheets over a chart, as sorted bitmasks.
    pub fn sheets(&self, c: Chart) -> Vec<u8> {
        match c {
            Chart::Cell(t) | Chart::Overlap(t, _) => {
                let m = self.cell_bits[t];
                (1..16u8).filter(|&x| !parity(x, m)).collect()
            }
            Chart::Point(i) => {
                let p = self.point_bits[i];
                let mut v: Vec<u8> = (1..16u8).map(|x| reduce(x, p)).filter(|&x| x != 0).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    /// Moves a sheet between an overlap and one of its two ambient charts,
    /// in either direction.
    pub fn transport(&self, src: Chart, dst: Chart, x: u8) -> Result<u8> {
        match (src, dst) {
            (Chart::Overlap(t, _), Chart::Cell(u)) | (Chart::Cell(u), Chart::Overlap(t, _)) if t == u => Ok(x),
            (Chart::Overlap(_, i), Chart::Point(j)) if i == j => Ok(reduce(x, self.point_bits[i])),
            (Chart::Point(i), Chart::Overlap(t, j)) if i == j => {
                let p = self.point_bits[i];
                let m = self.cell_bits[t];
                [x, x ^ p]
                    .into_iter()
                    .find(|&y| !parity(y, m))
                    .ok_or_else(|| Error::NotIncident(format!("no lift of sheet {x} into cell {t}")))
            }
            _ => Err(Error::NotIncident(format!("{src:?} and {dst:?} are not adjacent"))),
        }
    }

    /// Transports a sheet along a walk of adjacent charts.
    pub fn transport_along(&self, walk: &[Chart], x: u8) -> Result<u8> {
        walk.windows(2).try_fold(x, |y, w| self.transport(w[0], w[1], y))
    }

    /// The closed walk around the discriminant segment crossing the unit
    /// edge `p q` of 2-face `face`, starting and ending in the lower cell.
    pub fn meridian_walk(&self, face: usize, p: &LatticePoint4, q: &LatticePoint4) -> Vec<Chart> {
        let ts = self.base.cells_containing(&self.base.faces()[face]);
        let (t, t2) = (ts[0], ts[1]);
        let (ip, iq) = (self.point(p), self.point(q));
        vec![
            Chart::Cell(t),
            Chart::Overlap(t, ip),
            Chart::Point(ip),
            Chart::Overlap(t2, ip),
            Chart::Cell(t2),
            Chart::Overlap(t2, iq),
            Chart::Point(iq),
            Chart::Overlap(t, iq),
            Chart::Cell(t),
        ]
    }

    /// Neighbours of vertex `v` in ascending order.
    pub fn neighbours(&self, v: usize) -> [usize; 4] {
        let o: Vec<usize> = (0..5).filter(|&w| w != v).collect();
        [o[0], o[1], o[2], o[3]]
    }

    /// The sheet bitmask over the point chart of vertex `v` carrying label
    /// `label` (`1..=7`).
    pub fn vertex_sheet(&self, v: usize, label: u8) -> u8 {
        let nb = self.neighbours(v);
        let u = SHEET_VECTORS[label as usize - 1];
        let mut x = 0;
        for (a, &w) in u.iter().zip(&nb[..3]) {
            if *a == 1 {
                x ^= bits(&self.base.unit_direction(v, w));
            }
        }
        reduce(x, bits(&self.base.vertices()[v]))
    }

    /// The label (`1..=7`) of a sheet over the point chart of vertex `v`.
    pub fn vertex_label(&self, v: usize, sheet: u8) -> Result<u8> {
        (1..=SHEETS as u8)
            .find(|&l| self.vertex_sheet(v, l) == sheet)
            .ok_or_else(|| Error::Inconsistent(format!("sheet {sheet} has no label in chart {v}")))
    }

    /// The local monodromy of table entry `key` computed in the chart of
    /// vertex `v` by walking from the vertex's point chart around the
    /// segment crossing the first unit step along the entry's edge.
    pub fn branch_monodromy(&self, v: usize, key: TableKey) -> Result<SheetPermutation> {
        let nb = self.neighbours(v);
        let (wi, wj, wk) = (nb[key.i as usize - 1], nb[key.j as usize - 1], nb[key.k as usize - 1]);
        let face = self.base.face_index([v, wi, wj]);
        let p = self.base.vertices()[v];
        let q = add(&p, &self.base.unit_direction(v, wk));
        let ts = self.base.cells_containing(&self.base.faces()[face]);
        let (ip, iq) = (self.point(&p), self.point(&q));
        let walk = [
            Chart::Point(ip),
            Chart::Overlap(ts[0], ip),
            Chart::Cell(ts[0]),
            Chart::Overlap(ts[0], iq),
            Chart::Point(iq),
            Chart::Overlap(ts[1], iq),
            Chart::Cell(ts[1]),
            Chart::Overlap(ts[1], ip),
            Chart::Point(ip),
        ];
        let mut images = [0u8; SHEETS];
        for l in 1..=SHEETS as u8 {
            let y = self.transport_along(&walk, self.vertex_sheet(v, l))?;
            images[l as usize - 1] = self.vertex_label(v, y)?;
        }
        SheetPermutation::from_images(images)
    }

    /// The full table recomputed in the chart of vertex `v`.
    pub fn derived_table(&self, v: usize) -> Result<MonodromyTable> {
        let mut entries = BTreeMap::new();
        for key in table_keys() {
            entries.insert(key, self.branch_monodromy(v, key)?);
        }
        MonodromyTable::new(entries)
    }

    /// The table key of a branch read in the chart of vertex `v`, which
    /// must lie on the branch's edge.
    pub fn branch_key(&self, v: usize, br: Branch) -> Result<TableKey> {
        let [a, b] = self.base.edges()[br.edge];
        let face = self.base.faces()[br.face];
        if (a != v && b != v) || !face.contains(&v) {
            return Err(Error::NotIncident(format!("vertex {v} is not on branch {br:?}")));
        }
        let nb = self.neighbours(v);
        let pos = |w: usize| nb.iter().position(|&x| x == w).expect("neighbour") as u8 + 1;
        let others: Vec<u8> = face.iter().filter(|&&w| w != v).map(|&w| pos(w)).collect();
        let k = pos(if a == v { b } else { a });
        Ok(TableKey { i: others[0].min(others[1]), j: others[0].max(others[1]), k })
    }

    /// Orbit partition of a nerve simplex: the orbits of the table entries
    /// of its enclosed branches, read in its chart vertex.
    pub fn components(&self, table: &MonodromyTable, s: &NerveSimplex) -> Result<OrbitPartition> {
        let v = chart_vertex(&self.base, s);
        let gens = enclosed_branches(&self.base, s)
            .into_iter()
            .map(|br| self.branch_key(v, br).map(|k| table.get(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(orbits(&gens))
    }
}
