use std::sync::OnceLock;

use branched_cech::cech_engine::{
    bottom_row_complex, e2_page, global_cohomology, h1_row_complex, point_correspondence, total_betti, CechModel,
};
use branched_cech::exact_linalg::{AbelianGroup, Ring};
use branched_cech::monodromy::LocalSystem;

fn model() -> &'static CechModel<'static> {
    static LS: OnceLock<LocalSystem> = OnceLock::new();
    static MODEL: OnceLock<CechModel<'static>> = OnceLock::new();
    MODEL.get_or_init(|| CechModel::new(LS.get_or_init(LocalSystem::quintic)).expect("quintic model builds"))
}

fn z2(k: usize) -> AbelianGroup {
    AbelianGroup::new(0, &vec![2; k])
}

#[test]
fn every_region_matches_its_orbit_count_and_refines_its_faces() {
    let checked = model().check_orbit_refinement().unwrap();
    // Each simplex of degree k has k + 1 codimension-one faces.
    assert_eq!(checked, 2 * 110 + 3 * 170 + 4 * 85);
}

#[test]
fn bottom_row_over_the_integers() {
    let c = bottom_row_complex(model(), Ring::Z).unwrap();
    assert_eq!(c.dims(), vec![115, 710, 1190, 595]);
    assert_eq!(c.euler_characteristic(), 0);
    c.check_complex().unwrap();
    assert_eq!(c.differential_ranks(), vec![114, 596, 594]);
    let h = c.cohomology().unwrap();
    assert_eq!(h, vec![AbelianGroup::free(1), AbelianGroup::trivial(), z2(1), AbelianGroup::free(1)]);
}

#[test]
fn bottom_row_mod_two() {
    let c = bottom_row_complex(model(), Ring::Z2).unwrap();
    c.check_complex().unwrap();
    assert_eq!(c.differential_ranks(), vec![114, 595, 594]);
    assert_eq!(c.cohomology().unwrap(), vec![z2(1); 4]);
}

#[test]
fn first_cohomology_row_mod_two() {
    let c = h1_row_complex(model(), Ring::Z2).unwrap();
    assert_eq!(c.dims(), vec![300, 240]);
    assert_eq!(c.differential_ranks(), vec![200]);
}

#[test]
fn first_cohomology_row_over_the_integers() {
    let c = h1_row_complex(model(), Ring::Z).unwrap();
    assert_eq!(c.dims(), vec![240, 240]);
    assert_eq!(c.differential_ranks(), vec![212]);
}

#[test]
fn mod_two_e2_page() {
    let p = e2_page(model(), Ring::Z2).unwrap();
    assert_eq!(p.get(0, 2), &z2(60));
    assert_eq!(p.get(0, 1), &z2(100));
    assert_eq!(p.get(1, 1), &z2(40));
    for q in 0..4 {
        assert_eq!(p.get(q, 0), &z2(1));
    }
    for (pp, q) in [(1, 2), (2, 2), (3, 2), (2, 1), (3, 1)] {
        assert!(p.get(pp, q).is_trivial());
    }
}

#[test]
fn integral_e2_page_of_the_model() {
    let p = e2_page(model(), Ring::Z).unwrap();
    assert_eq!(p.get(0, 2), &z2(60));
    assert_eq!(p.get(0, 1), &AbelianGroup::free(28));
    assert_eq!(p.get(1, 1), &AbelianGroup::new(28, &[2; 20]));
    assert_eq!(p.get(2, 0), &z2(1));
}

#[test]
fn mod_two_totals_agree_with_the_global_region() {
    let r = total_betti(model(), Ring::Z2).unwrap();
    assert_eq!(r.betti_mod2, vec![1, 101, 101, 1]);
    assert!(r.degenerate);
    assert!(r.h2_two_primary);
}

#[test]
fn rational_totals_agree_with_the_global_region() {
    let g = global_cohomology(model().local_system());
    assert_eq!((g.h0, g.h1_mod2, g.b1), (1, 101, 28));
    let r = total_betti(model(), Ring::Z).unwrap();
    assert_eq!(r.rational, vec![1, 28, 28, 1]);
    assert!(r.degenerate);
}

#[test]
fn correspondence_with_interior_points() {
    let c = point_correspondence(model()).unwrap();
    assert_eq!(c.hexagon_classes.len(), 60);
    assert_eq!(c.edge_classes.len(), 40);
    assert!(c.edge_classes.iter().all(|e| e.faces.len() == 3));
    assert_eq!(c.total, 101);
    assert_eq!(c.batyrev_h21, 101);
    // Every interior point is used once.
    let mut pts: Vec<_> =
        c.hexagon_classes.iter().map(|h| h.point).chain(c.edge_classes.iter().map(|e| e.point)).collect();
    pts.sort();
    pts.dedup();
    assert_eq!(pts.len(), 100);
}

#[test]
fn e2_page_renders_three_rows() {
    let text = e2_page(model(), Ring::Z2).unwrap().to_string();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("q=2"));
}
