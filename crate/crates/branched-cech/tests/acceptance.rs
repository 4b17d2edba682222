//! Acceptance gates: one line per criterion, nonzero exit when any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use branched_cech::cech_engine::{
    bottom_row_complex, e2_page, h1_row_complex, point_correspondence, total_betti, CechModel, E2Page,
};
use branched_cech::exact_linalg::{rank_mod2, smith_normal_form, AbelianGroup, Ring, SparseIntMatrix};
use branched_cech::heegaard_oracle::{stable_h1, HeegaardOracle, Monodromy};
use branched_cech::lattice::{batyrev_h21, LatticePolytope};
use branched_cech::local_models::{
    cell_region, edge_region, face_region, hexagon_centers, hexagon_region, hexagon_union, local_cohomology,
    pair_region,
};
use branched_cech::monodromy::LocalSystem;
use branched_cech::toric_square::{match_table, square_report, Fan, TableMatch};

struct Gate {
    results: Vec<bool>,
}

impl Gate {
    fn record(&mut self, n: usize, name: &str, outcome: Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!("criterion {n} {name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        self.results.push(ok);
    }
}

fn z2(k: usize) -> AbelianGroup {
    AbelianGroup::new(0, &vec![2; k])
}

fn expect<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Result<String, String> {
    if got == want {
        Ok(format!("{what} = {got}"))
    } else {
        Err(format!("{what} = {got}, expected {want}"))
    }
}

fn all(checks: Vec<Result<String, String>>) -> Result<String, String> {
    let (ok, bad): (Vec<_>, Vec<_>) = checks.into_iter().partition(Result::is_ok);
    if bad.is_empty() {
        Ok(ok.into_iter().map(Result::unwrap).collect::<Vec<_>>().join("; "))
    } else {
        Err(bad.into_iter().map(Result::unwrap_err).collect::<Vec<_>>().join("; "))
    }
}

fn mod2_page(page: &E2Page) -> Result<String, String> {
    let mut checks = vec![
        expect("E^{0,2}", page.get(0, 2).clone(), z2(60)),
        expect("E^{0,1}", page.get(0, 1).clone(), z2(100)),
        expect("E^{1,1}", page.get(1, 1).clone(), z2(40)),
    ];
    for p in 0..4 {
        checks.push(expect(&format!("E^{{{p},0}}"), page.get(p, 0).clone(), z2(1)));
    }
    for (p, q) in [(1, 2), (2, 2), (3, 2), (2, 1), (3, 1)] {
        checks.push(expect(&format!("E^{{{p},{q}}}"), page.get(p, q).clone(), AbelianGroup::trivial()));
    }
    all(checks)
}

fn integral_page(page: &E2Page) -> Result<String, String> {
    let mut e11 = vec![2u64; 36];
    e11.extend([4; 6]);
    e11.extend([8; 4]);
    e11.extend([32; 2]);
    all(vec![
        expect("E^{0,2}", page.get(0, 2).clone(), z2(60)),
        expect("E^{0,1}", page.get(0, 1).clone(), AbelianGroup::trivial()),
        expect("E^{1,1}", page.get(1, 1).clone(), AbelianGroup::new(0, &e11)),
        expect("E^{0,0}", page.get(0, 0).clone(), AbelianGroup::free(1)),
        expect("E^{1,0}", page.get(1, 0).clone(), AbelianGroup::trivial()),
        expect("E^{2,0}", page.get(2, 0).clone(), z2(1)),
        expect("E^{3,0}", page.get(3, 0).clone(), AbelianGroup::free(1)),
    ])
}

fn criterion3(model: &CechModel<'_>) -> Result<String, String> {
    let c = bottom_row_complex(model, Ring::Z).map_err(|e| e.to_string())?;
    let h = c.cohomology().map_err(|e| e.to_string())?;
    let shown: Vec<String> = h.iter().map(ToString::to_string).collect();
    all(vec![
        expect("ranks", format!("{:?}", c.dims()), "[115, 710, 1190, 595]".to_string()),
        expect("euler characteristic", c.euler_characteristic(), 0),
        expect("cohomology", shown.join(", "), "Z, 0, Z/2, Z".to_string()),
    ])
}

fn criterion4(model: &CechModel<'_>) -> Result<String, String> {
    let m2 = total_betti(model, Ring::Z2).map_err(|e| e.to_string())?;
    let z = total_betti(model, Ring::Z).map_err(|e| e.to_string())?;
    let h1: AbelianGroup = z.graded[1].iter().fold(AbelianGroup::trivial(), |a, g| a.direct_sum(g));
    let max_ok = z.graded[2].iter().all(|g| g.exponent() <= BigInt::from(128));
    all(vec![
        expect("mod-2 Betti", format!("{:?}", m2.betti_mod2), "[1, 101, 101, 1]".to_string()),
        expect("mod-2 degeneration", m2.degenerate, true),
        expect("integral H^1 graded", h1, AbelianGroup::trivial()),
        expect("integral H^2 is 2-primary", z.h2_two_primary, true),
        expect("integral H^2 exponent at most 2^7", max_ok, true),
    ])
}

fn criterion5(model: &CechModel<'_>, page: &E2Page) -> Result<String, String> {
    let h21 = batyrev_h21(&LatticePolytope::quintic()).map_err(|e| e.to_string())?;
    let sum = page.dim_mod2(0, 2) + page.dim_mod2(1, 1) + 1;
    let c = point_correspondence(model).map_err(|e| e.to_string())?;
    all(vec![
        expect("batyrev h21", h21, 101),
        expect("dim E^{0,2} + dim E^{1,1} + 1", sum as i64, h21),
        expect("hexagon classes", c.hexagon_classes.len(), 60),
        expect("edge classes", c.edge_classes.len(), 40),
        expect("three summands each", c.edge_classes.iter().all(|e| e.faces.len() == 3), true),
    ])
}

fn criterion6(ls: &LocalSystem) -> Result<String, String> {
    let hex = hexagon_region(ls, 0, &hexagon_centers(ls, 0)[0]).map_err(|e| e.to_string())?;
    let glued = hexagon_union(ls, 0, 6).map_err(|e| e.to_string())?;
    let face = local_cohomology(&face_region(ls, 0));
    let pair = pair_region(ls, 0, 0).map_err(|e| e.to_string())?;
    let counts = (
        cell_region(ls, 0).component_count(),
        face_region(ls, 0).component_count(),
        edge_region(ls, 0).component_count(),
        pair.component_count(),
    );
    all(vec![
        expect("hexagon H_1", hex.h1(), AbelianGroup::new(3, &[2])),
        expect("glued face H_1", glued.h1(), AbelianGroup::new(9, &[2])),
        expect("face H^1", face.h1_z, AbelianGroup::free(12)),
        expect("face H^2", face.h2_z, z2(6)),
        expect("pair H^1", local_cohomology(&pair).h1_z, AbelianGroup::free(8)),
        expect("components", format!("{counts:?}"), "(7, 4, 4, 5)".to_string()),
    ])
}

fn criterion7(ls: &LocalSystem) -> Result<String, String> {
    let oracle = HeegaardOracle::new(ls, Monodromy::Quintic).map_err(|e| e.to_string())?;
    let r = oracle.run(0).map_err(|e| e.to_string())?;
    let seeds: Vec<u64> = (1..=12).collect();
    let stable = stable_h1(ls, &seeds).map(|(g, _)| g.to_string()).unwrap_or_else(|e| e.to_string());
    all(vec![
        expect("covering graph", format!("({}, {})", r.covering_vertices, r.covering_edges), "(14, 84)".to_string()),
        expect("relation matrix", format!("{}x{}", r.relations, r.generators), "120x71".to_string()),
        expect("cokernel", r.h1, z2(1)),
        expect("twelve seeds agree on", stable, "Z/2".to_string()),
    ])
}

fn criterion8() -> Result<String, String> {
    let mut checks = Vec::new();
    for (name, fan, want) in [
        ("projective 4-space", Fan::projective4(), (1, 126, 1, 0)),
        ("product of lines", Fan::p1_fourfold(), (4, 81, 0, 4)),
        ("line times 3-space", Fan::p1_times_p3(), (2, 105, 0, 2)),
    ] {
        match square_report(&fan) {
            Ok(r) => {
                checks.push(expect(name, format!("{:?}", r.tuple()), format!("{want:?}")));
                checks.push(expect(&format!("{name} in table"), match_table(&r) != TableMatch::Inconsistent, true));
            }
            Err(e) => checks.push(Err(format!("{name}: {e}"))),
        }
    }
    all(checks)
}

/// Determinantal divisors of a small integer matrix, by brute force.
fn minor_gcd_factors(a: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    fn det(mut a: Vec<Vec<i128>>) -> i128 {
        let n = a.len();
        let (mut sign, mut prev) = (1, 1i128);
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
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=a.len().min(cols) {
        let mut g = 0i128;
        'outer: for rs in subsets(a.len(), k) {
            for cs in subsets(cols, k) {
                let m = rs.iter().map(|&r| cs.iter().map(|&c| i128::from(a[r][c])).collect()).collect();
                g = g.gcd(&det(m));
                if g == 1 {
                    break 'outer;
                }
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

fn criterion9(ls: &LocalSystem, model: &CechModel<'_>) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut snf_failures = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = SparseIntMatrix::from_dense(c, &rows).expect("rectangular");
        let snf = smith_normal_form(&m);
        if snf.verify(&m).is_err() || snf.invariant_factors != minor_gcd_factors(&rows, c) {
            snf_failures += 1;
        }
    }
    let mut complexes_ok = true;
    for ring in [Ring::Z, Ring::Z2] {
        complexes_ok &= bottom_row_complex(model, ring).map(|c| c.check_complex().is_ok()).unwrap_or(false);
        complexes_ok &= h1_row_complex(model, ring).map(|c| c.check_complex().is_ok()).unwrap_or(false);
    }
    let mut regions = 0;
    let mut uct_ok = true;
    for (k, level) in model.nerve().by_degree.iter().enumerate() {
        for i in 0..level.len() {
            let r = model.region(k, i);
            let prod = r.boundary2().mul(&r.boundary1()).map(|p| p.is_zero()).unwrap_or(false);
            complexes_ok &= prod;
            uct_ok &= local_cohomology(r).uct_consistent();
            regions += 1;
        }
    }
    for f in 0..10 {
        for c in hexagon_centers(ls, f) {
            uct_ok &= hexagon_region(ls, f, &c).map(|r| local_cohomology(&r).uct_consistent()).unwrap_or(false);
        }
    }
    let refinement = model.check_orbit_refinement().map_err(|e| e.to_string());
    all(vec![
        expect("SNF mismatches in 1000 random matrices", snf_failures, 0),
        expect("delta squared vanishes on all complexes", complexes_ok, true),
        refinement.map(|n| format!("orbit refinement on {n} inclusions")),
        expect(&format!("UCT on {regions} regions and 60 hexagons"), uct_ok, true),
    ])
}

fn criterion10(ls: &LocalSystem, model: &CechModel<'_>) -> Result<String, String> {
    let c = bottom_row_complex(model, Ring::Z).map_err(|e| e.to_string())?;
    let cech = c.cohomology().map_err(|e| e.to_string())?[2].clone();
    let heegaard = HeegaardOracle::new(ls, Monodromy::Quintic).and_then(|o| o.run(42)).map_err(|e| e.to_string())?.h1;
    let rank_check = rank_mod2(&c.differentials[1]);
    all(vec![
        expect("Cech H^2", cech.clone(), z2(1)),
        expect("Heegaard H_1", heegaard.clone(), z2(1)),
        expect("agreement", cech == heegaard, true),
        expect("mod-2 rank of the middle differential", rank_check, 595),
    ])
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ls = LocalSystem::quintic();
    let model = match CechModel::new(&ls) {
        Ok(m) => m,
        Err(e) => {
            println!("model construction failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut gate = Gate { results: Vec::new() };
    let page2 = e2_page(&model, Ring::Z2);
    let pagez = e2_page(&model, Ring::Z);
    gate.record(1, "mod-2 E2 page", page2.as_ref().map_err(|e| e.to_string()).and_then(mod2_page));
    gate.record(2, "integral E2 page", pagez.as_ref().map_err(|e| e.to_string()).and_then(integral_page));
    gate.record(3, "bottom row", criterion3(&model));
    gate.record(4, "totalized cohomology", criterion4(&model));
    gate.record(
        5,
        "lattice point correspondence",
        page2.as_ref().map_err(|e| e.to_string()).and_then(|p| criterion5(&model, p)),
    );
    gate.record(6, "local models", criterion6(&ls));
    gate.record(7, "Heegaard oracle", criterion7(&ls));
    gate.record(8, "toric square", criterion8());
    gate.record(9, "property suites", criterion9(&ls, &model));
    gate.record(10, "cross-oracle agreement", criterion10(&ls, &model));
    let passed = gate.results.iter().filter(|&&b| b).count();
    println!("{passed}/{} criteria passed in {:.1?}", gate.results.len(), start.elapsed());
    if passed == gate.results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
