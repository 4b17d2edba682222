use branched_cech::base_complex::{build_cover, build_nerve, BaseComplex, CoverElement, NerveSimplex};
use branched_cech::monodromy::{
    orbits, quintic_monodromy_table, table_keys, Chart, LocalSystem, OrbitPartition, SheetPermutation, TableKey,
};
use proptest::prelude::*;

fn perm(s: &str) -> SheetPermutation {
    SheetPermutation::parse(s).unwrap()
}

fn part(blocks: &[&[u8]]) -> OrbitPartition {
    OrbitPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

#[test]
fn published_entries_are_double_transpositions() {
    let t = quintic_monodromy_table();
    assert_eq!(t.len(), 12);
    assert_eq!(t.get(TableKey { i: 1, j: 2, k: 1 }), perm("(12)(67)"));
    assert_eq!(t.get(TableKey { i: 1, j: 3, k: 3 }), perm("(47)(56)"));
    assert_eq!(t.get(TableKey { i: 3, j: 4, k: 4 }), perm("(25)(36)"));
    for (_, p) in t.entries() {
        assert!(p.is_double_transposition());
        assert!(p.is_involution());
    }
}

#[test]
fn local_system_reproduces_table_in_every_vertex_chart() {
    let ls = LocalSystem::quintic();
    let t = quintic_monodromy_table();
    for v in 0..5 {
        assert_eq!(ls.derived_table(v).unwrap(), t, "chart of vertex {v}");
    }
}

#[test]
fn every_edge_context_fixes_one_section_sheet() {
    let t = quintic_monodromy_table();
    for k in 1..=4u8 {
        let gens: Vec<SheetPermutation> =
            table_keys().into_iter().filter(|key| key.k == k).map(|key| t.get(key)).collect();
        assert_eq!(gens.len(), 3);
        let fixed: Vec<u8> = (1..=7).filter(|&x| gens.iter().all(|g| g.apply(x) == x)).collect();
        assert_eq!(fixed.len(), 1, "edge {k}: {fixed:?}");
    }
}

#[test]
fn orbit_examples() {
    assert_eq!(orbits(&[]).len(), 7);
    assert_eq!(orbits(&[perm("(12)(67)"), perm("(16)(27)")]), part(&[&[1, 2, 6, 7], &[3], &[4], &[5]]));
    assert_eq!(
        orbits(&[perm("(12)(67)"), perm("(45)(67)"), perm("(12)(45)")]),
        part(&[&[1, 2], &[3], &[4, 5], &[6, 7]])
    );
}

#[test]
fn nerve_components_match_local_model_counts() {
    let ls = LocalSystem::quintic();
    let t = quintic_monodromy_table();
    let b = ls.base();
    let count = |s: Vec<CoverElement>| ls.components(&t, &NerveSimplex(s)).unwrap().len();
    for c in 0..5 {
        assert_eq!(count(vec![CoverElement::Cell(c)]), 7);
    }
    for f in 0..10 {
        assert_eq!(count(vec![CoverElement::Face(f)]), 4);
    }
    for e in 0..10 {
        assert_eq!(count(vec![CoverElement::Edge(e)]), 4);
        for f in 0..10 {
            let [x, y] = b.edges()[e];
            if b.faces()[f].contains(&x) && b.faces()[f].contains(&y) {
                assert_eq!(count(vec![CoverElement::Edge(e), CoverElement::Face(f)]), 5);
            }
        }
    }
}

#[test]
fn positive_vertex_pattern() {
    let ls = LocalSystem::quintic();
    let t = quintic_monodromy_table();
    let b = ls.base();
    let s = NerveSimplex(vec![CoverElement::Edge(b.edge_index(0, 1))]);
    assert_eq!(ls.components(&t, &s).unwrap(), part(&[&[1, 2], &[3], &[4, 5], &[6, 7]]));
}

#[test]
fn nerve_simplex_orbits_refine_sub_simplex_orbits_in_a_shared_chart() {
    let ls = LocalSystem::quintic();
    let t = quintic_monodromy_table();
    let b = BaseComplex::quintic();
    let nerve = build_nerve(&b, &build_cover(&b));
    let mut checked = 0;
    for level in &nerve.by_degree[1..] {
        for s in level {
            for j in 0..s.0.len() {
                let sub = s.delete(j);
                let (vs, vsub) = (
                    branched_cech::base_complex::chart_vertex(&b, s),
                    branched_cech::base_complex::chart_vertex(&b, &sub),
                );
                if vs == vsub {
                    let a = ls.components(&t, s).unwrap();
                    let c = ls.components(&t, &sub).unwrap();
                    assert!(a.refines(&c), "{s:?} vs {sub:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn transport_rejects_non_adjacent_charts() {
    let ls = LocalSystem::quintic();
    assert!(ls.transport(Chart::Cell(0), Chart::Cell(1), 3).is_err());
    assert!(ls.transport(Chart::Overlap(0, 1), Chart::Point(2), 3).is_err());
}

#[test]
fn sheet_counts_are_seven_everywhere() {
    let ls = LocalSystem::quintic();
    for t in 0..5 {
        assert_eq!(ls.sheets(Chart::Cell(t)).len(), 7);
    }
    for i in 0..ls.base().boundary_points().len() {
        assert_eq!(ls.sheets(Chart::Point(i)).len(), 7);
    }
}

#[test]
fn parse_rejects_malformed_cycles() {
    for bad in ["", "(12", "(18)", "(11)", "(12)(23)", "12", "(1a)"] {
        assert!(SheetPermutation::parse(bad).is_err(), "{bad:?}");
    }
    assert_eq!(perm("()"), SheetPermutation::identity());
    assert_eq!(perm("(1 2)(6 7)"), perm("(12)(67)"));
    assert_eq!(perm("(123)").to_string(), "(123)");
}

fn any_perm() -> impl Strategy<Value = SheetPermutation> {
    Just((1..=7u8).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| SheetPermutation::from_images([v[0], v[1], v[2], v[3], v[4], v[5], v[6]]).unwrap())
}

proptest! {
    #[test]
    fn display_parse_round_trip(p in any_perm()) {
        prop_assert_eq!(SheetPermutation::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn inverse_composes_to_identity(p in any_perm()) {
        prop_assert_eq!(p.compose(&p.inverse()), SheetPermutation::identity());
    }

    #[test]
    fn adding_generators_coarsens_orbits(gens in proptest::collection::vec(any_perm(), 0..4), extra in any_perm()) {
        let before = orbits(&gens);
        let mut more = gens.clone();
        more.push(extra);
        let after = orbits(&more);
        prop_assert!(before.refines(&after));
        prop_assert!(after.len() <= before.len());
    }
}
