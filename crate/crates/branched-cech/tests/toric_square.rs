use branched_cech::error::Error;
use branched_cech::toric_square::{
    fano_table, intersection_number, match_table, square_rank_in_random_basis, square_report, Fan, TableMatch,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn projective_space_row() {
    let r = square_report(&Fan::projective4()).unwrap();
    assert_eq!(r.tuple(), (1, 126, 1, 0));
    assert_eq!(r.h1_lagrangian, 1);
    assert_eq!(match_table(&r), TableMatch::Consistent(124));
}

#[test]
fn product_of_lines_row() {
    let r = square_report(&Fan::p1_fourfold()).unwrap();
    assert_eq!(r.tuple(), (4, 81, 0, 4));
    assert_eq!(r.h1_lagrangian, 8);
    assert_eq!(match_table(&r), TableMatch::Ambiguous(vec![107, 119]));
}

#[test]
fn line_times_three_space_row() {
    let r = square_report(&Fan::p1_times_p3()).unwrap();
    assert_eq!(r.tuple(), (2, 105, 0, 2));
    assert_eq!(match_table(&r), TableMatch::Consistent(122));
}

#[test]
fn two_planes_row_is_in_table() {
    let r = square_report(&Fan::p2_times_p2()).unwrap();
    assert_eq!(r.h11, 2);
    assert_eq!(r.h0_antik, 100);
    assert_ne!(match_table(&r), TableMatch::Inconsistent, "{r:?}");
}

#[test]
fn table_has_124_rows_with_d_equal_h11_minus_rank() {
    let t = fano_table();
    assert_eq!(t.len(), 124);
    for (i, row) in t.iter().enumerate() {
        assert_eq!(row.id as usize, i + 1);
        assert_eq!(row.d + row.rank, row.h11);
    }
}

#[test]
fn hyperplane_power_is_one() {
    let f = Fan::projective4();
    for r in 0..5 {
        assert_eq!(intersection_number(&f, [r; 4]), 1);
    }
    assert_eq!(intersection_number(&f, [0, 1, 2, 3]), 1);
}

#[test]
fn distinct_rays_outside_a_cone_give_zero() {
    let f = Fan::p1_fourfold();
    // rays 0 and 1 are the two rays of the first line factor.
    assert_eq!(intersection_number(&f, [0, 1, 2, 4]), 0);
    assert_eq!(intersection_number(&f, [0, 2, 4, 6]), 1);
}

#[test]
fn intersection_numbers_are_symmetric() {
    let f = Fan::p1_times_p3();
    let n = f.rays().len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let x = intersection_number(&f, [a, a, b, c]);
                assert_eq!(x, intersection_number(&f, [c, b, a, a]));
                assert_eq!(x, intersection_number(&f, [b, a, c, a]));
            }
        }
    }
}

#[test]
fn square_rank_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for fan in [Fan::projective4(), Fan::p1_fourfold(), Fan::p1_times_p3(), Fan::p2_times_p2()] {
        let r = square_report(&fan).unwrap().rank_square;
        for _ in 0..5 {
            assert_eq!(square_rank_in_random_basis(&fan, &mut rng), r);
        }
    }
}

#[test]
fn even_anticanonical_class_gives_zero_rank() {
    // On products of lines and of a line with 3-space, -K is divisible by two.
    for fan in [Fan::p1_fourfold(), Fan::p1_times_p3()] {
        let r = square_report(&fan).unwrap();
        assert_eq!(r.rank_square, 0);
        assert_eq!(r.d, r.h11);
    }
}

#[test]
fn missing_cone_is_not_complete() {
    let f = Fan::projective4();
    let mut cones = f.max_cones().to_vec();
    cones.pop();
    let broken = Fan::new(f.rays().to_vec(), cones);
    assert!(matches!(broken.validate(), Err(Error::NotComplete(_))));
}

#[test]
fn determinant_two_cone_is_not_smooth() {
    let rays = vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 2], [-1, -1, -1, -1]];
    let cones = branched_cech_combinations(5, 4);
    let f = Fan::new(rays, cones);
    assert!(matches!(f.validate(), Err(Error::NotSmooth { det, .. }) if det.abs() == 2));
}

fn branched_cech_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[test]
fn json_round_trip_and_rejections() {
    let f = Fan::p1_times_p3();
    assert_eq!(Fan::from_json(&f.to_json()).unwrap(), f);
    assert!(matches!(Fan::from_json("{"), Err(Error::Parse(_))));
    assert!(matches!(Fan::from_json(r#"{"rays": [], "max_cones": [], "x": 1}"#), Err(Error::Parse(_))));
    assert!(matches!(Fan::from_json(r#"{"rays": [[1,0,0,0]], "max_cones": []}"#), Err(Error::InvalidFan(_))));
    let nonprimitive = r#"{"rays": [[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[-1,-1,-1,-1]], "max_cones": [[0,1,2,3]]}"#;
    assert!(matches!(Fan::from_json(nonprimitive), Err(Error::InvalidFan(_))));
}
