use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use branched_cech::exact_linalg::{
    cohomology_at, cohomology_dim_mod2, dump_triplets, invariant_factors, normalize_diagonal, parse_triplets,
    rank_mod2, rank_mod_p, rank_rational, smith_normal_form, AbelianGroup, KernelBasis, Ring, SparseIntMatrix,
};

fn matrix_strategy(max: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)))
}

/// Fraction-free determinant of a small square matrix.
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Determinantal divisors `g_k = gcd of all k x k minors`, then
/// `d_k = g_k / g_{k-1}` until the first zero.
fn minor_gcd_factors(a: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m = rs.iter().map(|&r| cs.iter().map(|&c| i128::from(a[r][c])).collect()).collect();
                g = g.gcd(&det(m));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        out.push(BigInt::from(g / prev));
        prev = g;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_matches_minor_gcds((cols, rows) in matrix_strategy(8)) {
        let m = SparseIntMatrix::from_dense(cols, &rows).unwrap();
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.verify(&m), Ok(()));
        prop_assert_eq!(&snf.invariant_factors, &minor_gcd_factors(&rows, cols));
        prop_assert_eq!(&invariant_factors(&m), &snf.invariant_factors);
        prop_assert_eq!(rank_rational(&m), snf.rank());
        let odd = snf.invariant_factors.iter().filter(|d| d.is_odd()).count();
        prop_assert_eq!(rank_mod2(&m), odd);
        let prime3 = snf.invariant_factors.iter().filter(|d| !(*d % 3u8).is_zero()).count();
        prop_assert_eq!(rank_mod_p(&m, 3), prime3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triplet_round_trip((cols, rows) in matrix_strategy(10)) {
        let m = SparseIntMatrix::from_dense(cols, &rows).unwrap();
        let text = dump_triplets(&m);
        prop_assert_eq!(parse_triplets(&text).unwrap(), m);
    }

    #[test]
    fn kernel_basis_vectors_are_in_the_kernel((cols, rows) in matrix_strategy(7)) {
        let m = SparseIntMatrix::from_dense(cols, &rows).unwrap();
        for ring in [Ring::Z, Ring::Z2] {
            let k = KernelBasis::new(&m, ring);
            let expected = match ring {
                Ring::Z => cols - rank_rational(&m),
                Ring::Z2 => cols - rank_mod2(&m),
            };
            prop_assert_eq!(k.dim(), expected);
            for j in 0..k.dim() {
                let v = k.basis_vector(j);
                let image = m.apply(&v).unwrap();
                let zero = match ring {
                    Ring::Z => image.iter().all(Zero::is_zero),
                    Ring::Z2 => image.iter().all(|x| x.is_even()),
                };
                prop_assert!(zero);
                let mut e = vec![BigInt::zero(); k.dim()];
                e[j] = BigInt::one();
                let coords: Vec<BigInt> = k.coordinates(&v).unwrap().into_iter().map(|c| match ring {
                    Ring::Z => c,
                    Ring::Z2 => c.mod_floor(&BigInt::from(2)),
                }).collect();
                prop_assert_eq!(coords, e);
            }
        }
    }

    #[test]
    fn normalized_diagonals_form_a_chain(d in prop::collection::vec(1i64..200, 1..8)) {
        let diag: Vec<BigInt> = d.iter().map(|&x| BigInt::from(x)).collect();
        let n = normalize_diagonal(&diag);
        let prod_in: BigInt = diag.iter().product();
        let prod_out: BigInt = n.iter().product();
        prop_assert_eq!(prod_in, prod_out);
        for w in n.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }
}

#[test]
fn cokernel_of_a_known_matrix() {
    let m = SparseIntMatrix::from_dense(3, &[vec![2, 0, 0], vec![0, 4, 0]]).unwrap();
    assert_eq!(AbelianGroup::cokernel(&m.transpose()), AbelianGroup::new(1, &[2, 4]));
    assert_eq!(AbelianGroup::presented(&m), AbelianGroup::new(1, &[2, 4]));
    assert_eq!(AbelianGroup::new(1, &[2, 4]).to_string(), "Z + Z/2 + Z/4");
}

#[test]
fn group_invariants() {
    let g = AbelianGroup::new(2, &[2, 6, 8]);
    assert_eq!(g.dim_mod2(), 5);
    assert_eq!(g.even_torsion_count(), 3);
    assert!(!g.is_finite());
    assert_eq!(g.exponent(), BigInt::from(24));
    assert_eq!(g.hom_to_z(), AbelianGroup::free(2));
    assert_eq!(g.ext_to_z(), AbelianGroup::new(0, &[2, 6, 8]));
    assert!(AbelianGroup::new(0, &[2, 4]).is_two_primary_torsion());
    assert!(!AbelianGroup::new(0, &[2, 6]).is_two_primary_torsion());
    assert_eq!(AbelianGroup::new(0, &[6, 1]), AbelianGroup::new(0, &[2, 3]));
}

#[test]
fn cohomology_of_the_real_projective_plane() {
    // Cellular cochains of RP^2 with one cell in each degree.
    let d0 = SparseIntMatrix::from_dense(1, &[vec![0]]).unwrap();
    let d1 = SparseIntMatrix::from_dense(1, &[vec![2]]).unwrap();
    let none_in = SparseIntMatrix::zeros(1, 0);
    let none_out = SparseIntMatrix::zeros(0, 1);
    assert_eq!(cohomology_at(&none_in, &d0).unwrap(), AbelianGroup::free(1));
    assert_eq!(cohomology_at(&d0, &d1).unwrap(), AbelianGroup::trivial());
    assert_eq!(cohomology_at(&d1, &none_out).unwrap(), AbelianGroup::new(0, &[2]));
    assert_eq!(cohomology_dim_mod2(&d0, &d1).unwrap(), 1);
    assert_eq!(cohomology_dim_mod2(&d1, &none_out).unwrap(), 1);
}

#[test]
fn triplet_parser_rejects_malformed_input() {
    for bad in ["", "3", "2 2\n0 0", "2 2\n2 0 1", "2 2\n0 0 1\n0 0 2", "2 2\n0 0 x", "99999999999 1"] {
        assert!(parse_triplets(bad).is_err(), "{bad:?}");
    }
    let m = parse_triplets("# header\n2 3\n\n0 2 -5\n1 0 123456789012345678901234567890\n").unwrap();
    assert_eq!(m.get(0, 2), BigInt::from(-5));
    assert_eq!(m.nnz(), 2);
}

#[test]
fn shape_errors_are_reported() {
    let a = SparseIntMatrix::zeros(2, 3);
    assert!(a.mul(&a).is_err());
    assert!(SparseIntMatrix::from_dense(2, &[vec![1, 2, 3]]).is_err());
}
