use branched_cech::base_complex::{
    build_base, build_cover, build_discriminant, build_nerve, enclosed_branches, intersects, BaseComplex, CoverElement,
    NerveSimplex, VertexSign,
};
use branched_cech::lattice::LatticePolytope;

#[test]
fn quintic_base_counts() {
    let b = BaseComplex::quintic();
    assert_eq!(b.counts(), (5, 10, 10, 5));
    assert_eq!(b.edge_length(), 5);
    assert_eq!(b.boundary_points().len(), 125);
    for t in 0..5 {
        assert!(!b.cells()[t].contains(&t));
        let pts = b.boundary_points().iter().filter(|p| b.in_cell(p, t)).count();
        assert_eq!(pts, 56, "cell {t}");
    }
    for (f, fv) in b.faces().iter().enumerate() {
        assert_eq!(b.points_on(fv).len(), 21);
        assert_eq!(b.cells_containing(fv).len(), 2);
        assert_eq!(b.face_index(*fv), f);
        assert_eq!(b.unit_edges_on(fv).len(), 45);
    }
    for (e, ev) in b.edges().iter().enumerate() {
        assert_eq!(b.edge_index(ev[0], ev[1]), e);
        assert_eq!(b.cells_containing(ev).len(), 3);
        assert_eq!(b.unit_edges_on(ev).len(), 5);
    }
}

#[test]
fn discriminant_graph_is_trivalent() {
    let d = build_discriminant(&BaseComplex::quintic());
    let pos = d.vertices.iter().filter(|v| v.sign == VertexSign::Positive).count();
    let neg = d.vertices.iter().filter(|v| v.sign == VertexSign::Negative).count();
    assert_eq!((pos, neg), (50, 250));
    assert_eq!(d.segments.len(), 450);
    assert!(d.degrees().iter().all(|&k| k == 3));
    assert!(d.vertices.iter().all(|v| !v.location.is_integral()));
    assert_eq!(d.hexagons.len(), 60);
    assert!(d.hexagons.iter().all(|h| h.boundary_arcs.len() == 6));
}

#[test]
fn nerve_sizes() {
    let b = BaseComplex::quintic();
    let cover = build_cover(&b);
    assert_eq!(cover.len(), 25);
    let nerve = build_nerve(&b, &cover);
    assert_eq!(nerve.counts(), vec![25, 110, 170, 85]);
    let ranks: Vec<usize> = vec![115, 710, 1190, 595];
    assert_eq!(ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum::<i64>(), 0);
}

#[test]
fn intersection_rules() {
    let b = BaseComplex::quintic();
    use CoverElement::*;
    let e01 = b.edge_index(0, 1);
    let e02 = b.edge_index(0, 2);
    let e34 = b.edge_index(3, 4);
    let f012 = b.face_index([0, 1, 2]);
    let f123 = b.face_index([1, 2, 3]);
    assert!(intersects(&b, &[Edge(e01), Face(f012)]));
    assert!(!intersects(&b, &[Edge(e34), Face(f012)]));
    assert!(intersects(&b, &[Edge(e01), Edge(e02)]));
    assert!(!intersects(&b, &[Edge(e01), Edge(e34)]));
    assert!(!intersects(&b, &[Face(f012), Face(f123)]));
    assert!(!intersects(&b, &[Cell(0), Cell(1)]));
    assert!(!intersects(&b, &[Edge(e01), Cell(0)]));
    assert!(intersects(&b, &[Edge(e01), Face(f012), Cell(3)]));
}

#[test]
fn nerve_is_closed_under_faces() {
    let b = BaseComplex::quintic();
    let nerve = build_nerve(&b, &build_cover(&b));
    for k in 1..nerve.by_degree.len() {
        for s in &nerve.by_degree[k] {
            for j in 0..=k {
                assert!(nerve.by_degree[k - 1].binary_search(&s.delete(j)).is_ok());
            }
        }
    }
}

#[test]
fn enclosed_branch_counts() {
    let b = BaseComplex::quintic();
    use CoverElement::*;
    assert_eq!(enclosed_branches(&b, &NerveSimplex(vec![Edge(0)])).len(), 3);
    assert_eq!(enclosed_branches(&b, &NerveSimplex(vec![Face(0)])).len(), 2);
    assert_eq!(enclosed_branches(&b, &NerveSimplex(vec![Edge(0), Face(0)])).len(), 1);
    assert!(enclosed_branches(&b, &NerveSimplex(vec![Cell(0)])).is_empty());
}

#[test]
fn non_simplices_are_rejected() {
    let cube = LatticePolytope::cross_polytope();
    assert!(build_base(&cube).is_err());
    let seg = LatticePolytope::new(vec![[0, 0, 0, 0], [1, 0, 0, 0]]).unwrap();
    assert!(build_base(&seg).is_err());
}
