//! Cech complexes of the pushforward sheaves over the nerve, their E2
//! pages, totalized Betti numbers, and the correspondence between E2
//! generators and interior lattice points.
//!
//! The bottom row is the Cech complex of the sheaf of locally constant
//! functions on the cover, with one generator per connected component over
//! each nerve simplex. The first-cohomology row pairs the edge and face
//! elements with their 30 incident intersections through restriction of
//! cocycles. The second-cohomology row is concentrated on the face
//! elements.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::base_complex::{build_cover, build_nerve, CoverElement, Nerve, NerveSimplex};
use crate::error::{Error, Result};
use crate::exact_linalg::{cohomology_at, rank_mod2, rank_rational, AbelianGroup, BitMatrix, Ring, SparseIntMatrix};
use crate::lattice::{batyrev_h21, LatticePoint4};
use crate::local_models::{
    class_order, component_map, global_region, hexagon_centers, hexagon_region, inclusion_map, local_cohomology,
    restriction, simplex_region, torsion_classes, Region,
};
use crate::monodromy::{quintic_monodromy_table, Chart, LocalSystem};

/// The nerve of the cover together with the region of every simplex.
pub struct CechModel<'a> {
    ls: &'a LocalSystem,
    nerve: Nerve,
    regions: Vec<Vec<Region<'a>>>,
}

impl<'a> CechModel<'a> {
    /// Builds the nerve and all simplex regions, in parallel.
    pub fn new(ls: &'a LocalSystem) -> Result<Self> {
        let b = ls.base();
        let nerve = build_nerve(b, &build_cover(b));
        let regions = nerve
            .by_degree
            .iter()
            .map(|level| level.par_iter().map(|s| simplex_region(ls, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ls, nerve, regions })
    }

    /// The local system.
    pub fn local_system(&self) -> &'a LocalSystem {
        self.ls
    }

    /// The nerve.
    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    /// Region of simplex `i` of degree `k`.
    pub fn region(&self, k: usize, i: usize) -> &Region<'a> {
        &self.regions[k][i]
    }

    fn index_of(&self, s: &NerveSimplex) -> usize {
        self.nerve.by_degree[s.degree()].binary_search(s).expect("faces of nerve simplices are nerve simplices")
    }

    /// Checks, for every simplex and every face obtained by deleting one
    /// element, that the component count equals the number of monodromy
    /// orbits and that every component lands in a single component of the
    /// face. Returns the number of inclusions checked.
    pub fn check_orbit_refinement(&self) -> Result<usize> {
        let table = quintic_monodromy_table();
        let mut checked = 0;
        for (k, level) in self.nerve.by_degree.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                let r = &self.regions[k][i];
                let orbits = self.ls.components(&table, s)?;
                if orbits.len() != r.component_count() {
                    return Err(Error::Inconsistent(format!(
                        "{s:?}: {} components but {} monodromy orbits",
                        r.component_count(),
                        orbits.len()
                    )));
                }
                if k == 0 {
                    continue;
                }
                for j in 0..s.0.len() {
                    let face = s.delete(j);
                    component_map(r, &self.regions[k - 1][self.index_of(&face)])?;
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }
}

/// A cochain complex with labelled bases and differentials acting on
/// column vectors: `differentials[k]` maps degree `k` to degree `k + 1`.
#[derive(Clone, Debug)]
pub struct CechComplex {
    /// Coefficient ring; mod-2 complexes have entries in `{0, 1}`.
    pub ring: Ring,
    /// Basis labels per degree.
    pub labels: Vec<Vec<String>>,
    /// Differentials.
    pub differentials: Vec<SparseIntMatrix>,
}

impl CechComplex {
    /// Cochain ranks by degree.
    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    /// Euler characteristic of the cochain ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims().iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Checks that consecutive differentials compose to zero over the
    /// complex's ring.
    pub fn check_complex(&self) -> Result<()> {
        for (k, w) in self.differentials.windows(2).enumerate() {
            let zero = match self.ring {
                Ring::Z => w[1].mul(&w[0])?.is_zero(),
                Ring::Z2 => BitMatrix::from_int(&w[1]).mul(&BitMatrix::from_int(&w[0])).is_zero(),
            };
            if !zero {
                return Err(Error::NotAComplex(format!("d{} * d{k} is nonzero", k + 1)));
            }
        }
        Ok(())
    }

    /// Ranks of the differentials over the complex's ring (rational rank
    /// for the integers).
    pub fn differential_ranks(&self) -> Vec<usize> {
        self.differentials
            .iter()
            .map(|d| match self.ring {
                Ring::Z => rank_rational(d),
                Ring::Z2 => rank_mod2(d),
            })
            .collect()
    }

    fn boundary_maps(&self, k: usize) -> (SparseIntMatrix, SparseIntMatrix) {
        let dims = self.dims();
        let d_in = if k == 0 { SparseIntMatrix::zeros(dims[0], 0) } else { self.differentials[k - 1].clone() };
        let d_out =
            if k + 1 == dims.len() { SparseIntMatrix::zeros(0, dims[k]) } else { self.differentials[k].clone() };
        (d_in, d_out)
    }

    /// Cohomology in every degree. Over the two-element field the groups
    /// are elementary abelian 2-groups of the computed dimension.
    pub fn cohomology(&self) -> Result<Vec<AbelianGroup>> {
        let dims = self.dims();
        (0..dims.len())
            .map(|k| {
                let (d_in, d_out) = self.boundary_maps(k);
                match self.ring {
                    Ring::Z => cohomology_at(&d_in, &d_out),
                    Ring::Z2 => {
                        let dim = dims[k] - rank_mod2(&d_in) - rank_mod2(&d_out);
                        Ok(elementary(dim))
                    }
                }
            })
            .collect()
    }
}

/// The elementary abelian 2-group of the given rank.
pub fn elementary(dim: usize) -> AbelianGroup {
    AbelianGroup::new(0, &vec![2; dim])
}

fn reduce(m: SparseIntMatrix, ring: Ring) -> SparseIntMatrix {
    match ring {
        Ring::Z => m,
        Ring::Z2 => {
            let mut out = SparseIntMatrix::zeros(m.rows(), m.cols());
            let two = BigInt::from(2);
            for (r, c, v) in m.iter() {
                if !(v % &two).is_zero() {
                    out.set(r, c, 1);
                }
            }
            out
        }
    }
}

fn simplex_label(s: &NerveSimplex) -> String {
    s.0.iter()
        .map(|c| match c {
            CoverElement::Edge(e) => format!("e{e}"),
            CoverElement::Face(f) => format!("f{f}"),
            CoverElement::Cell(t) => format!("c{t}"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// The Cech complex of the locally constant sheaf: one generator per
/// connected component over each nerve simplex, with alternating
/// restriction signs in cover order.
pub fn bottom_row_complex(model: &CechModel<'_>, ring: Ring) -> Result<CechComplex> {
    let levels = &model.nerve.by_degree;
    let mut labels = Vec::new();
    let mut offsets = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let mut off = Vec::new();
        let mut lab = Vec::new();
        for (i, s) in level.iter().enumerate() {
            off.push(lab.len());
            for c in 0..model.regions[k][i].component_count() {
                lab.push(format!("{}#{c}", simplex_label(s)));
            }
        }
        offsets.push(off);
        labels.push(lab);
    }
    let differentials = (0..levels.len() - 1)
        .into_par_iter()
        .map(|k| {
            let mut d = SparseIntMatrix::zeros(labels[k + 1].len(), labels[k].len());
            for (i, s) in levels[k + 1].iter().enumerate() {
                let r = &model.regions[k + 1][i];
                for j in 0..s.0.len() {
                    let fi = model.index_of(&s.delete(j));
                    let map = component_map(r, &model.regions[k][fi])?;
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    for (c, &target) in map.iter().enumerate() {
                        d.add_to(offsets[k + 1][i] + c, offsets[k][fi] + target, sign);
                    }
                }
            }
            Ok(reduce(d, ring))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CechComplex { ring, labels, differentials })
}

fn is_pair(s: &NerveSimplex) -> bool {
    matches!(s.0.as_slice(), [CoverElement::Edge(_), CoverElement::Face(_)])
}

/// Checks that first cohomology vanishes over every simplex other than
/// the edge and face elements and their incident pairs, so the first
/// cohomology row has length two.
fn check_h1_support(model: &CechModel<'_>) -> Result<()> {
    for (k, level) in model.nerve.by_degree.iter().enumerate() {
        for (i, s) in level.iter().enumerate() {
            let carries = match k {
                0 => !matches!(s.0[0], CoverElement::Cell(_)),
                1 => is_pair(s),
                _ => false,
            };
            if !carries && !model.regions[k][i].h1().is_trivial() {
                return Err(Error::Inconsistent(format!("{s:?} has nonzero first homology")));
            }
        }
    }
    Ok(())
}

/// The two-term first-cohomology row `C^0 -> C^1`, with
/// `(delta c)_{ef} = c_f - c_e` restricted to the pair.
pub fn h1_row_complex(model: &CechModel<'_>, ring: Ring) -> Result<CechComplex> {
    check_h1_support(model)?;
    let level0: Vec<(usize, &NerveSimplex)> =
        model.nerve.by_degree[0].iter().enumerate().filter(|(_, s)| !matches!(s.0[0], CoverElement::Cell(_))).collect();
    let level1: Vec<(usize, &NerveSimplex)> =
        model.nerve.by_degree[1].iter().enumerate().filter(|(_, s)| is_pair(s)).collect();
    let coh0: Vec<_> = level0.par_iter().map(|&(i, _)| model.regions[0][i].cohomology(ring)).collect();
    let coh1: Vec<_> = level1.par_iter().map(|&(i, _)| model.regions[1][i].cohomology(ring)).collect();
    let mut off0 = BTreeMap::new();
    let mut labels0 = Vec::new();
    for ((i, s), c) in level0.iter().zip(&coh0) {
        off0.insert(*i, labels0.len());
        labels0.extend((0..c.dim()).map(|j| format!("{}#{j}", simplex_label(s))));
    }
    let mut off1 = Vec::new();
    let mut labels1 = Vec::new();
    for ((_, s), c) in level1.iter().zip(&coh1) {
        off1.push(labels1.len());
        labels1.extend((0..c.dim()).map(|j| format!("{}#{j}", simplex_label(s))));
    }
    let pos0: BTreeMap<usize, usize> = level0.iter().enumerate().map(|(p, &(i, _))| (i, p)).collect();
    let blocks = level1
        .par_iter()
        .enumerate()
        .map(|(p, &(_, s))| {
            let mut out = Vec::new();
            for (j, sign) in [(0usize, -1i64), (1, 1)] {
                let el = model.index_of(&s.delete(1 - j));
                let m = restriction(&coh0[pos0[&el]], &coh1[p])?;
                for (r, c, v) in m.iter() {
                    out.push((off1[p] + r, off0[&el] + c, v * sign));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut d = SparseIntMatrix::zeros(labels1.len(), labels0.len());
    for (r, c, v) in blocks.into_iter().flatten() {
        d.add_to(r, c, v);
    }
    Ok(CechComplex { ring, labels: vec![labels0, labels1], differentials: vec![reduce(d, ring)] })
}

/// Second cohomology of every cover element, checked to vanish on every
/// intersection, so the second row is concentrated in Cech degree zero.
fn h2_row_zero(model: &CechModel<'_>, ring: Ring) -> Result<AbelianGroup> {
    for (k, level) in model.nerve.by_degree.iter().enumerate().skip(1) {
        for (i, s) in level.iter().enumerate() {
            if !model.regions[k][i].h1().torsion.is_empty() {
                return Err(Error::Inconsistent(format!("{s:?} has torsion in first homology")));
            }
        }
    }
    let mut total = AbelianGroup::trivial();
    for r in &model.regions[0] {
        let c = local_cohomology(r);
        total = total.direct_sum(&match ring {
            Ring::Z => c.h2_z,
            Ring::Z2 => elementary(c.h2_z2),
        });
    }
    Ok(total)
}

/// The E2 page, `entries[p][q]` for `0 <= p <= 3` and `0 <= q <= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Page {
    /// Coefficient ring.
    pub ring: Ring,
    /// Entries indexed by Cech degree then sheaf degree.
    pub entries: Vec<Vec<AbelianGroup>>,
}

impl E2Page {
    /// Entry `E_2^{p,q}`.
    pub fn get(&self, p: usize, q: usize) -> &AbelianGroup {
        &self.entries[p][q]
    }

    /// Dimension over the two-element field of an entry's group tensored
    /// with it; for mod-2 pages this is the entry's dimension.
    pub fn dim_mod2(&self, p: usize, q: usize) -> usize {
        self.entries[p][q].dim_mod2()
    }

    /// Rows from top to bottom as printed: `q = 2, 1, 0`, each listing its
    /// nonzero support.
    pub fn rows(&self) -> Vec<Vec<&AbelianGroup>> {
        vec![vec![self.get(0, 2)], vec![self.get(0, 1), self.get(1, 1)], (0..4).map(|p| self.get(p, 0)).collect()]
    }
}

impl fmt::Display for E2Page {
    /// Renders the three rows top to bottom, entries separated by commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, row) in [2usize, 1, 0].iter().zip(self.rows()) {
            let parts: Vec<String> = row.iter().map(|g| g.to_string()).collect();
            writeln!(f, "q={q}: {}", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Computes the E2 page over the given ring.
pub fn e2_page(model: &CechModel<'_>, ring: Ring) -> Result<E2Page> {
    let (bottom, (h1, h2)) = rayon::join(
        || bottom_row_complex(model, ring),
        || rayon::join(|| h1_row_complex(model, ring), || h2_row_zero(model, ring)),
    );
    let (h1, h2) = (h1?, h2?);
    let bottom = bottom?;
    bottom.check_complex()?;
    let row0 = bottom.cohomology()?;
    let d = &h1.differentials[0];
    let (e01, e11) = match ring {
        Ring::Z => {
            let rank = rank_rational(d);
            (AbelianGroup::free(d.cols() - rank), AbelianGroup::cokernel(d))
        }
        Ring::Z2 => {
            let rank = rank_mod2(d);
            (elementary(d.cols() - rank), elementary(d.rows() - rank))
        }
    };
    let z = AbelianGroup::trivial;
    let entries = vec![
        vec![row0[0].clone(), e01, h2],
        vec![row0[1].clone(), e11, z()],
        vec![row0[2].clone(), z(), z()],
        vec![row0[3].clone(), z(), z()],
    ];
    Ok(E2Page { ring, entries })
}

/// Cohomology of the whole cover computed directly from the global
/// region, for comparison with the E2 page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalCohomology {
    /// Connected components.
    pub h0: usize,
    /// Dimension of first mod-2 cohomology.
    pub h1_mod2: usize,
    /// First Betti number.
    pub b1: usize,
}

/// Computes first cohomology of the global region over the two-element
/// field and the rationals.
pub fn global_cohomology(ls: &LocalSystem) -> GlobalCohomology {
    let g = global_region(ls);
    let pres = g.presentation();
    let n = pres.generators();
    let (m2, mq) = rayon::join(|| rank_mod2(&pres.relations), || rank_rational(&pres.relations));
    GlobalCohomology { h0: g.component_count(), h1_mod2: n - m2, b1: n - mq }
}

/// Totalized cohomology read off the E2 page, with the degeneration check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    /// Coefficient ring.
    pub ring: Ring,
    /// Mod-2 Betti numbers by total degree (for the integers, the
    /// dimensions of the entries tensored with the two-element field).
    pub betti_mod2: Vec<usize>,
    /// Rational ranks of the page by total degree.
    pub rational: Vec<usize>,
    /// Graded pieces of each total degree, `E^{n,0}` first.
    pub graded: Vec<Vec<AbelianGroup>>,
    /// Direct computation on the global region.
    pub global: GlobalCohomology,
    /// True when the page totals agree with the direct computation.
    pub degenerate: bool,
    /// Whether every graded piece of total degree two is a finite 2-group.
    pub h2_two_primary: bool,
    /// Largest torsion exponent among the graded pieces of degree two.
    pub h2_max_exponent: String,
}

/// Sums the E2 page along anti-diagonals and compares with the global
/// model: mod-2 Betti numbers `(h0, h1, h1, h0)` by duality, and rational
/// Betti numbers `(1, b1, b1, 1)`.
pub fn total_betti(model: &CechModel<'_>, ring: Ring) -> Result<BettiReport> {
    let page = e2_page(model, ring)?;
    let global = global_cohomology(model.ls);
    let mut graded = vec![Vec::new(); 4];
    for (p, col) in page.entries.iter().enumerate() {
        for (q, g) in col.iter().enumerate() {
            if p + q < 4 {
                graded[p + q].push(g.clone());
            }
        }
    }
    let betti_mod2: Vec<usize> =
        (0..4).map(|n| (0..=n.min(3)).filter(|&p| n - p <= 2).map(|p| page.dim_mod2(p, n - p)).sum()).collect();
    let rational: Vec<usize> = graded.iter().map(|v| v.iter().map(|g| g.free_rank).sum()).collect();
    let expect_mod2 = [global.h0, global.h1_mod2, global.h1_mod2, global.h0];
    let expect_q = [1, global.b1, global.b1, 1];
    let degenerate = match ring {
        Ring::Z2 => betti_mod2 == expect_mod2,
        Ring::Z => rational == expect_q,
    };
    let h2_two_primary = graded[2].iter().all(|g| g.is_finite() && g.is_two_primary_torsion());
    let h2_max_exponent = graded[2].iter().map(|g| g.exponent()).max().unwrap_or_default().to_string();
    Ok(BettiReport { ring, betti_mod2, rational, graded, global, degenerate, h2_two_primary, h2_max_exponent })
}

/// A hexagon class: the torsion class of the hexagon around an interior
/// point of a 2-face, pushed into the face's first homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonClass {
    /// 2-face index.
    pub face: usize,
    /// Interior lattice point at the hexagon's center.
    pub point: LatticePoint4,
}

/// An edge class: the sum over the three faces through an edge of the
/// lifted loops around an interior point of the edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    /// Edge index.
    pub edge: usize,
    /// Interior lattice point of the edge.
    pub point: LatticePoint4,
    /// The three faces contributing summands.
    pub faces: Vec<usize>,
}

/// The correspondence between E2 generators and interior lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    /// Generators of `E_2^{0,2}`, one per interior point of a 2-face.
    pub hexagon_classes: Vec<HexagonClass>,
    /// Generators of `E_2^{1,1}` over the two-element field, one per
    /// interior point of an edge.
    pub edge_classes: Vec<EdgeClass>,
    /// `dim E_2^{0,2} + dim E_2^{1,1} + 1` over the two-element field.
    pub total: usize,
    /// The Batyrev value of `h^{2,1}`.
    pub batyrev_h21: i64,
}

/// Builds both halves of the correspondence and verifies them.
///
/// Hexagon classes must have order two in the face homology and together
/// span its torsion. Edge classes, read as functionals on the mod-2 first
/// cohomology of the 30 pairs, must annihilate the image of the row
/// differential and be linearly independent, so that they form a basis of
/// the dual of `E_2^{1,1}`.
pub fn point_correspondence(model: &CechModel<'_>) -> Result<CorrespondenceReport> {
    let ls = model.ls;
    let b = ls.base();
    let hexagon_classes = (0..b.faces().len())
        .into_par_iter()
        .map(|f| face_hexagon_classes(model, f))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    let row = h1_row_complex(model, Ring::Z2)?;
    let delta = &row.differentials[0];
    let pairs: Vec<(usize, &NerveSimplex)> =
        model.nerve.by_degree[1].iter().enumerate().filter(|(_, s)| is_pair(s)).collect();
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for &(i, s) in &pairs {
        let c = model.regions[1][i].cohomology(Ring::Z2);
        offsets.insert((s.edges()[0], s.faces()[0]), (i, off));
        off += c.dim();
    }
    let mut functionals = Vec::new();
    let mut edge_classes = Vec::new();
    for (e, ev) in b.edges().iter().enumerate() {
        let pts = b.points_on(ev);
        let faces: Vec<usize> = (0..b.faces().len()).filter(|&f| ev.iter().all(|v| b.faces()[f].contains(v))).collect();
        let d = b.unit_direction(ev[0], ev[1]);
        for p in pts.iter().filter(|p| !b.vertices().contains(p)) {
            let mut w = vec![0u8; delta.rows()];
            let mut summands = 0;
            for &f in &faces {
                let (ri, o) = offsets[&(e, f)];
                let vals = pair_loop_functional(&model.regions[1][ri], f, p, &d)?;
                for (j, v) in vals.into_iter().enumerate() {
                    w[o + j] ^= v;
                }
                summands += 1;
            }
            if summands != 3 {
                return Err(Error::Correspondence(format!("edge class at {p:?} has {summands} summands")));
            }
            check_annihilates(&w, delta, p)?;
            functionals.push(w);
            edge_classes.push(EdgeClass { edge: e, point: *p, faces: faces.clone() });
        }
    }
    let mut fm = BitMatrix::zeros(functionals.len(), delta.rows());
    for (r, w) in functionals.iter().enumerate() {
        for (c, &v) in w.iter().enumerate() {
            fm.set(r, c, v == 1);
        }
    }
    if fm.rank() != functionals.len() {
        return Err(Error::Correspondence("edge classes are linearly dependent".into()));
    }
    let coker = delta.rows() - rank_mod2(delta);
    if functionals.len() != coker {
        return Err(Error::Correspondence(format!(
            "{} edge classes for a cokernel of dimension {coker}",
            functionals.len()
        )));
    }
    let total = hexagon_classes.len() + edge_classes.len() + 1;
    Ok(CorrespondenceReport { hexagon_classes, edge_classes, total, batyrev_h21: batyrev_h21(b.polytope())? })
}

fn check_annihilates(w: &[u8], delta: &SparseIntMatrix, p: &LatticePoint4) -> Result<()> {
    let mut acc = vec![0u8; delta.cols()];
    for (r, c, v) in delta.iter() {
        if w[r] == 1 && v.to_u8().map_or(true, |x| x % 2 == 1) {
            acc[c] ^= 1;
        }
    }
    if acc.iter().any(|&x| x != 0) {
        return Err(Error::Correspondence(format!(
            "edge class at {p:?} is not in the kernel of the dual differential"
        )));
    }
    Ok(())
}

/// Values on the mod-2 cohomology basis of a pair region of the lifted
/// loop around point `p` of the pair's edge, summed over the two
/// nontrivial components.
fn pair_loop_functional(r: &Region<'_>, face: usize, p: &LatticePoint4, d: &LatticePoint4) -> Result<Vec<u8>> {
    let ls = r.local_system();
    let b = ls.base();
    let ts = b.cells_containing(&b.faces()[face]);
    let (t, t2) = (ts[0], ts[1]);
    let minus = [p[0] - d[0], p[1] - d[1], p[2] - d[2], p[3] - d[3]];
    let plus = [p[0] + d[0], p[1] + d[1], p[2] + d[2], p[3] + d[3]];
    let (a, c) = (ls.point(&minus), ls.point(&plus));
    let walk = [
        Chart::Cell(t),
        Chart::Overlap(t, a),
        Chart::Point(a),
        Chart::Overlap(t2, a),
        Chart::Cell(t2),
        Chart::Overlap(t2, c),
        Chart::Point(c),
        Chart::Overlap(t, c),
        Chart::Cell(t),
    ];
    // Group the sheets over the first cell by component; the components
    // holding two of them are the nontrivial ones.
    let mut blocks: BTreeMap<usize, Vec<u8>> = BTreeMap::new();
    for x in ls.sheets(Chart::Cell(t)) {
        let n = r.node(Chart::Cell(t), x).expect("pair region holds its cells");
        blocks.entry(r.component_of(n)).or_default().push(x);
    }
    let nontrivial: Vec<u8> = blocks.values().filter(|v| v.len() > 1).map(|v| v[0]).collect();
    if nontrivial.len() != 2 {
        return Err(Error::Correspondence(format!("{} has {} nontrivial components", r.name(), nontrivial.len())));
    }
    let coh = r.cohomology(Ring::Z2);
    let mut out = vec![0u8; coh.dim()];
    for x in nontrivial {
        let chain = r.lift_walk(&walk, x)?;
        for (j, o) in out.iter_mut().enumerate() {
            let v = coh.evaluate(&coh.basis_vector(j), &chain);
            *o ^= u8::from(!(v % BigInt::from(2)).is_zero());
        }
    }
    Ok(out)
}

fn face_hexagon_classes(model: &CechModel<'_>, f: usize) -> Result<Vec<HexagonClass>> {
    let ls = model.ls;
    let fi = model.index_of(&NerveSimplex(vec![CoverElement::Face(f)]));
    let face = &model.regions[0][fi];
    let face_pres = face.presentation();
    let mut classes = Vec::new();
    let mut out = Vec::new();
    for center in hexagon_centers(ls, f) {
        let hex = hexagon_region(ls, f, &center)?;
        let tors = torsion_classes(&hex.presentation());
        if tors.len() != 1 || tors[0].1 != BigInt::from(2) {
            return Err(Error::Correspondence(format!("hexagon at {center:?} has torsion {tors:?}")));
        }
        let map = inclusion_map(&hex, face)?;
        let image = map.matrix.apply(&tors[0].0)?;
        let image: Vec<i64> = image.iter().map(|x| x.to_i64().expect("small coefficients")).collect();
        if class_order(&face_pres, &image) != Some(2) {
            return Err(Error::Correspondence(format!("hexagon class at {center:?} is not of order two in face {f}")));
        }
        classes.push(image);
        out.push(HexagonClass { face: f, point: center });
    }
    // The classes span the torsion exactly when killing them leaves a free group.
    let mut rows = face_pres.relations.row_maps();
    for c in &classes {
        rows.push(c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, BigInt::from(v))).collect());
    }
    let quotient = AbelianGroup::presented(&SparseIntMatrix::from_row_maps(face_pres.generators(), &rows)?);
    let g = face_pres.group();
    if quotient != AbelianGroup::free(g.free_rank) || g.torsion.len() != classes.len() {
        return Err(Error::Correspondence(format!("hexagon classes of face {f} do not span its torsion")));
    }
    Ok(out)
}
