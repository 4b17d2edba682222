use branched_cech::lattice::{
    batyrev_h21, enumerate_lattice_points, face_lattice, interior_points, is_reflexive, try_enumerate_lattice_points,
    LatticePolytope,
};
use proptest::prelude::*;

#[test]
fn quintic_simplex_point_counts() {
    let p = LatticePolytope::quintic();
    assert_eq!(p.dim(), 4);
    assert_eq!(enumerate_lattice_points(&p).len(), 126);
    assert_eq!(interior_points(&p).unwrap(), vec![[0; 4]]);
    assert!(is_reflexive(&p).unwrap());
    let faces = face_lattice(&p).unwrap();
    let by_dim = |d| faces.iter().filter(|f| f.dim == d).collect::<Vec<_>>();
    assert_eq!((by_dim(0).len(), by_dim(1).len(), by_dim(2).len(), by_dim(3).len()), (5, 10, 10, 5));
    assert!(by_dim(1).iter().all(|f| f.lattice_points.len() == 6 && f.interior_points.len() == 4));
    assert!(by_dim(2).iter().all(|f| f.lattice_points.len() == 21 && f.interior_points.len() == 6));
    assert!(by_dim(3).iter().all(|f| f.interior_points.len() == 4));
}

#[test]
fn quintic_batyrev_number() {
    assert_eq!(batyrev_h21(&LatticePolytope::quintic()).unwrap(), 101);
}

#[test]
fn cross_polytope_is_reflexive() {
    let p = LatticePolytope::cross_polytope();
    assert!(is_reflexive(&p).unwrap());
    assert_eq!(enumerate_lattice_points(&p).len(), 9);
    assert_eq!(p.facets().len(), 16);
    assert_eq!(batyrev_h21(&p).unwrap(), 4);
}

#[test]
fn unit_simplex_is_not_reflexive() {
    let p = LatticePolytope::unit_simplex();
    assert!(!is_reflexive(&p).unwrap());
    assert!(batyrev_h21(&p).is_err());
}

#[test]
fn face_incidences_are_symmetric() {
    let faces = face_lattice(&LatticePolytope::quintic()).unwrap();
    for (i, f) in faces.iter().enumerate() {
        for &s in &f.subfaces {
            assert!(faces[s].superfaces.contains(&i));
            assert!(faces[s].vertex_ids.iter().all(|v| f.vertex_ids.contains(v)));
        }
    }
}

#[test]
fn json_input_is_validated() {
    let ok = r#"{"vertices": [[-1,-1,-1,-1],[4,-1,-1,-1],[-1,4,-1,-1],[-1,-1,4,-1],[-1,-1,-1,4]]}"#;
    assert_eq!(LatticePolytope::from_json(ok).unwrap(), LatticePolytope::quintic());
    for bad in [
        "",
        "{}",
        r#"{"vertices": []}"#,
        r#"{"vertices": [[0,0,0]]}"#,
        r#"{"vertices": [[0,0,0,0],[0,0,0,0]]}"#,
        r#"{"vertices": [[0,0,0,0],[1,0,0,0],[2,0,0,0]]}"#,
        r#"{"vertices": [[0,0,0,0]], "extra": 1}"#,
    ] {
        assert!(LatticePolytope::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn lower_dimensional_polytopes_are_rejected_where_needed() {
    let seg = LatticePolytope::new(vec![[0, 0, 0, 0], [3, 0, 0, 0]]).unwrap();
    assert_eq!(seg.dim(), 1);
    assert_eq!(enumerate_lattice_points(&seg).len(), 4);
    assert!(interior_points(&seg).is_err());
    assert!(!is_reflexive(&seg).unwrap());
}

#[test]
fn huge_boxes_are_refused() {
    let p =
        LatticePolytope::new(vec![[0, 0, 0, 0], [1000, 0, 0, 0], [0, 1000, 0, 0], [0, 0, 1000, 0], [0, 0, 0, 1000]])
            .unwrap();
    assert!(try_enumerate_lattice_points(&p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The dilated standard simplex `k * conv{0, e_i}` has C(k+4, 4) points.
    #[test]
    fn dilated_simplex_point_count(k in 1i64..7) {
        let mut v = vec![[0; 4]];
        for i in 0..4 {
            let mut p = [0; 4];
            p[i] = k;
            v.push(p);
        }
        let p = LatticePolytope::new(v).unwrap();
        let k = k as usize;
        let expected = (k + 1) * (k + 2) * (k + 3) * (k + 4) / 24;
        prop_assert_eq!(enumerate_lattice_points(&p).len(), expected);
    }

    /// Lattice point counts are invariant under integer translation.
    #[test]
    fn translation_invariance(t in prop::array::uniform4(-5i64..5)) {
        let q = LatticePolytope::quintic();
        let moved: Vec<_> = q.vertices().iter().map(|v| [v[0] + t[0], v[1] + t[1], v[2] + t[2], v[3] + t[3]]).collect();
        let p = LatticePolytope::new(moved).unwrap();
        prop_assert_eq!(enumerate_lattice_points(&p).len(), 126);
        prop_assert_eq!(interior_points(&p).unwrap().len(), 1);
    }
}
