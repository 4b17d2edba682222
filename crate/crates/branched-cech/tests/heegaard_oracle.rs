use branched_cech::exact_linalg::AbelianGroup;
use branched_cech::heegaard_oracle::{crossings, legs, stable_h1, HeegaardOracle, Monodromy};
use branched_cech::monodromy::LocalSystem;
use proptest::prelude::*;

fn z2() -> AbelianGroup {
    AbelianGroup::new(0, &[2])
}

#[test]
fn contracted_spine_has_twelve_crossings_and_thirty_legs() {
    let ls = LocalSystem::quintic();
    assert_eq!(crossings().len(), 12);
    let all = legs(&ls);
    assert_eq!(all.len(), 30);
    assert!(all.iter().all(|l| l.v < l.w));
}

#[test]
fn covering_graph_shape_and_relation_matrix() {
    let ls = LocalSystem::quintic();
    let o = HeegaardOracle::new(&ls, Monodromy::Quintic).unwrap();
    assert_eq!(o.edges().len(), 84);
    assert!(o.permutations().iter().all(|p| {
        let mut s = p.to_vec();
        s.sort_unstable();
        s == (0..7).collect::<Vec<_>>()
    }));
    let r = o.run(0).unwrap();
    assert_eq!((r.covering_vertices, r.covering_edges, r.covering_components), (14, 84, 1));
    assert_eq!((r.relations, r.generators), (120, 71));
    assert_eq!(r.choice.uncut.len(), 6);
    assert_eq!(r.choice.tree.len(), 13);
    assert_eq!(r.h1, z2());
}

#[test]
fn every_meridian_lifts_to_five_closed_loops_with_even_crossings() {
    let ls = LocalSystem::quintic();
    let o = HeegaardOracle::new(&ls, Monodromy::Quintic).unwrap();
    for leg in legs(&ls) {
        let lifts = o.lift_leg(&leg).unwrap();
        assert_eq!(lifts.len(), 5, "{leg:?}");
        assert!(lifts.iter().all(|(_, c)| c % 2 == 0), "{leg:?}");
    }
}

#[test]
fn omitted_disks_are_redundant() {
    let ls = LocalSystem::quintic();
    let r = HeegaardOracle::new(&ls, Monodromy::Quintic).unwrap().run(7).unwrap();
    assert_eq!(r.h1_all_legs, r.h1);
}

#[test]
fn trivial_monodromy_gives_seven_copies_of_the_sphere() {
    let ls = LocalSystem::quintic();
    let r = HeegaardOracle::new(&ls, Monodromy::Trivial).unwrap().run(3).unwrap();
    assert_eq!(r.covering_components, 7);
    assert_eq!(r.generators, 84 - 14 + 7);
    assert_eq!(r.relations, 7 * 24);
    assert!(r.h1.is_trivial());
}

#[test]
fn stable_across_ten_seeds() {
    let ls = LocalSystem::quintic();
    let seeds: Vec<u64> = (100..110).collect();
    let (h1, reports) = stable_h1(&ls, &seeds).unwrap();
    assert_eq!(h1, z2());
    assert_eq!(reports.len(), 10);
    let distinct: std::collections::BTreeSet<_> = reports.iter().map(|r| r.choice.tree.clone()).collect();
    assert!(distinct.len() > 1);
}

#[test]
fn empty_seed_list_is_rejected() {
    let ls = LocalSystem::quintic();
    assert!(stable_h1(&ls, &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn any_seed_gives_z2(seed in any::<u64>()) {
        let ls = LocalSystem::quintic();
        let r = HeegaardOracle::new(&ls, Monodromy::Quintic).unwrap().run(seed).unwrap();
        prop_assert_eq!(r.h1, z2());
        prop_assert!(r.even_crossings);
    }
}
