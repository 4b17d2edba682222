//! Subcommand implementations. Each returns a [`Report`] or an input error.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use branched_cech::cech_engine::{
    bottom_row_complex, e2_page, h1_row_complex, point_correspondence, total_betti, CechModel, E2Page,
};
use branched_cech::exact_linalg::{dump_triplets, smith_normal_form, AbelianGroup, Ring, SparseIntMatrix};
use branched_cech::heegaard_oracle::{stable_h1, HeegaardOracle, Monodromy};
use branched_cech::lattice::{batyrev_h21, enumerate_lattice_points, LatticePolytope};
use branched_cech::local_models::{
    cell_region, edge_region, face_region, hexagon_centers, hexagon_region, hexagon_union, local_cohomology,
    pair_region,
};
use branched_cech::monodromy::{quintic_monodromy_table, LocalSystem, MonodromyTable};
use branched_cech::toric_square::{match_table, square_report, Fan, TableMatch};

use crate::report::{Gate, Report};

/// An error in the user's input; reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

type Outcome = Result<Report, InputError>;

fn z2(k: usize) -> AbelianGroup {
    AbelianGroup::new(0, &vec![2; k])
}

fn ring_name(ring: Ring) -> &'static str {
    match ring {
        Ring::Z => "z",
        Ring::Z2 => "z2",
    }
}

fn quintic_inputs(extra: &str) -> Vec<u8> {
    let v = LatticePolytope::quintic().vertices().to_vec();
    format!("{}|{extra}", json!({ "vertices": v })).into_bytes()
}

fn read_input(path: &Path) -> Result<(Vec<u8>, String), InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|_| InputError(format!("{} is not valid UTF-8", path.display())))?;
    Ok((bytes, text))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library reports serialize")
}

/// The quintic local system and its Cech model, built once per process.
pub struct Quintic {
    ls: &'static LocalSystem,
    model: Result<CechModel<'static>, String>,
}

impl Quintic {
    /// Builds the model.
    pub fn new() -> Self {
        let ls: &'static LocalSystem = Box::leak(Box::new(LocalSystem::quintic()));
        let model = CechModel::new(ls).map_err(|e| e.to_string());
        Self { ls, model }
    }
}

fn model_or_gate<'q>(q: &'q Quintic, name: &str) -> Result<&'q CechModel<'static>, Gate> {
    q.model.as_ref().map_err(|e| Gate::error(name, e))
}

fn page_gates(page: &E2Page) -> Vec<Gate> {
    let g = |p: usize, q: usize, want: AbelianGroup| Gate::expect(&format!("E2^{{{p},{q}}}"), page.get(p, q), want);
    match page.ring {
        Ring::Z2 => {
            let mut v = vec![g(0, 2, z2(60)), g(0, 1, z2(100)), g(1, 1, z2(40))];
            v.extend((0..4).map(|p| g(p, 0, z2(1))));
            v
        }
        Ring::Z => {
            let mut e11 = vec![2u64; 36];
            e11.extend([4; 6]);
            e11.extend([8; 4]);
            e11.extend([32; 2]);
            vec![
                g(0, 2, z2(60)),
                g(0, 1, AbelianGroup::trivial()),
                g(1, 1, AbelianGroup::new(0, &e11)),
                g(0, 0, AbelianGroup::free(1)),
                g(1, 0, AbelianGroup::trivial()),
                g(2, 0, z2(1)),
                g(3, 0, AbelianGroup::free(1)),
            ]
        }
    }
}

/// `quintic e2`.
pub fn quintic_e2(q: &Quintic, ring: Ring) -> Outcome {
    let inputs = quintic_inputs(ring_name(ring));
    let command = format!("quintic e2 --ring {}", ring_name(ring));
    let model = match model_or_gate(q, "E2 page") {
        Ok(m) => m,
        Err(g) => return Ok(Report::new(command, &inputs, Value::Null, vec![g])),
    };
    Ok(match e2_page(model, ring) {
        Ok(page) => {
            let outputs = json!({ "page": to_value(&page), "display": page.to_string() });
            Report::new(command, &inputs, outputs, page_gates(&page))
        }
        Err(e) => Report::new(command, &inputs, Value::Null, vec![Gate::error("E2 page", e)]),
    })
}

fn betti_gates(model: &CechModel<'_>, ring: Ring) -> (Value, Vec<Gate>) {
    match total_betti(model, ring) {
        Ok(r) => {
            let gates = match ring {
                Ring::Z2 => vec![
                    Gate::expect("mod-2 Betti numbers", format!("{:?}", r.betti_mod2), "[1, 101, 101, 1]"),
                    Gate::expect("mod-2 page totals match the global model", r.degenerate, true),
                ],
                Ring::Z => {
                    let h1 = r.graded[1].iter().fold(AbelianGroup::trivial(), |a, g| a.direct_sum(g));
                    let bounded = r.graded[2].iter().all(|g| g.exponent() <= 128u32.into());
                    vec![
                        Gate::expect("integral H^1", h1, AbelianGroup::trivial()),
                        Gate::expect("integral H^2 is a finite 2-group", r.h2_two_primary, true),
                        Gate::expect("integral H^2 exponent at most 128", bounded, true),
                        Gate::expect("rational page totals match the global model", r.degenerate, true),
                    ]
                }
            };
            (to_value(&r), gates)
        }
        Err(e) => (Value::Null, vec![Gate::error("totalized cohomology", e)]),
    }
}

/// `quintic betti`.
pub fn quintic_betti(q: &Quintic, ring: Ring) -> Outcome {
    let inputs = quintic_inputs(ring_name(ring));
    let command = format!("quintic betti --ring {}", ring_name(ring));
    let (outputs, gates) = match model_or_gate(q, "totalized cohomology") {
        Ok(m) => betti_gates(m, ring),
        Err(g) => (Value::Null, vec![g]),
    };
    Ok(Report::new(command, &inputs, outputs, gates))
}

fn bottom_row_gates(model: &CechModel<'_>, ring: Ring) -> (Value, Vec<Gate>) {
    let c = match bottom_row_complex(model, ring) {
        Ok(c) => c,
        Err(e) => return (Value::Null, vec![Gate::error("bottom row", e)]),
    };
    let h = match c.cohomology() {
        Ok(h) => h,
        Err(e) => return (Value::Null, vec![Gate::error("bottom row cohomology", e)]),
    };
    let shown: Vec<String> = h.iter().map(ToString::to_string).collect();
    let want = match ring {
        Ring::Z => "Z, 0, Z/2, Z",
        Ring::Z2 => "Z/2, Z/2, Z/2, Z/2",
    };
    let outputs = json!({
        "ring": ring_name(ring),
        "dims": c.dims(),
        "differential_ranks": c.differential_ranks(),
        "euler_characteristic": c.euler_characteristic(),
        "cohomology": to_value(&h),
    });
    let gates = vec![
        Gate::expect("cochain ranks", format!("{:?}", c.dims()), "[115, 710, 1190, 595]"),
        Gate::expect("Euler characteristic", c.euler_characteristic(), 0),
        Gate::expect("differentials compose to zero", c.check_complex().is_ok(), true),
        Gate::expect("cohomology", shown.join(", "), want),
    ];
    (outputs, gates)
}

/// `quintic bottom-row`.
pub fn quintic_bottom_row(q: &Quintic, ring: Ring) -> Outcome {
    let inputs = quintic_inputs(ring_name(ring));
    let command = format!("quintic bottom-row --ring {}", ring_name(ring));
    let (outputs, gates) = match model_or_gate(q, "bottom row") {
        Ok(m) => bottom_row_gates(m, ring),
        Err(g) => (Value::Null, vec![g]),
    };
    Ok(Report::new(command, &inputs, outputs, gates))
}

fn correspondence_gates(model: &CechModel<'_>) -> (Value, Vec<Gate>) {
    match point_correspondence(model) {
        Ok(c) => {
            let gates = vec![
                Gate::expect("hexagon classes", c.hexagon_classes.len(), 60),
                Gate::expect("edge classes", c.edge_classes.len(), 40),
                Gate::expect("three summands per edge class", c.edge_classes.iter().all(|e| e.faces.len() == 3), true),
                Gate::expect("generators plus one equals h21", c.total as i64, c.batyrev_h21),
                Gate::expect("h21", c.batyrev_h21, 101),
            ];
            (to_value(&c), gates)
        }
        Err(e) => (Value::Null, vec![Gate::error("correspondence", e)]),
    }
}

/// `quintic correspondence`.
pub fn quintic_correspondence(q: &Quintic) -> Outcome {
    let inputs = quintic_inputs("");
    let (outputs, gates) = match model_or_gate(q, "correspondence") {
        Ok(m) => correspondence_gates(m),
        Err(g) => (Value::Null, vec![g]),
    };
    Ok(Report::new("quintic correspondence", &inputs, outputs, gates))
}

fn heegaard_gates(ls: &LocalSystem, seed: u64, with_matrix: bool) -> (Value, Vec<Gate>) {
    let report = match HeegaardOracle::new(ls, Monodromy::Quintic).and_then(|o| o.run(seed)) {
        Ok(r) => r,
        Err(e) => return (Value::Null, vec![Gate::error("Heegaard oracle", e)]),
    };
    let seeds: Vec<u64> = (0..10).map(|k| seed.wrapping_add(k)).collect();
    let stable = stable_h1(ls, &seeds).map(|(g, _)| g.to_string()).unwrap_or_else(|e| e.to_string());
    let mut outputs = to_value(&report);
    if with_matrix {
        outputs["relation_matrix"] = Value::String(dump_triplets(&report.relation_matrix));
    }
    let gates = vec![
        Gate::expect(
            "covering graph",
            format!("({}, {})", report.covering_vertices, report.covering_edges),
            "(14, 84)",
        ),
        Gate::expect("relation matrix", format!("{}x{}", report.relations, report.generators), "120x71"),
        Gate::expect("cokernel", &report.h1, z2(1)),
        Gate::expect("all thirty legs give the same group", &report.h1_all_legs, &report.h1),
        Gate::expect("even crossing counts", report.even_crossings, true),
        Gate::expect("ten seeds agree", stable, "Z/2"),
    ];
    (outputs, gates)
}

/// `quintic heegaard`.
pub fn quintic_heegaard(q: &Quintic, seed: u64, with_matrix: bool) -> Outcome {
    let inputs = quintic_inputs(&format!("seed={seed}"));
    let (outputs, gates) = heegaard_gates(q.ls, seed, with_matrix);
    Ok(Report::new(format!("quintic heegaard --seed {seed}"), &inputs, outputs, gates))
}

/// `batyrev <polytope.json>`.
pub fn batyrev(path: &Path) -> Outcome {
    let (bytes, text) = read_input(path)?;
    let p = LatticePolytope::from_json(&text).map_err(|e| InputError(e.to_string()))?;
    let h21 = batyrev_h21(&p).map_err(|e| InputError(e.to_string()))?;
    let outputs = json!({
        "h21": h21,
        "lattice_points": enumerate_lattice_points(&p).len(),
        "facets": p.facets().len(),
    });
    Ok(Report::new(format!("batyrev {}", path.display()), &bytes, outputs, Vec::new()))
}

/// `fano square <fan.json>`.
pub fn fano_square(path: &Path, with_table: bool) -> Outcome {
    let (bytes, text) = read_input(path)?;
    let fan = Fan::from_json(&text).map_err(|e| InputError(e.to_string()))?;
    let r = square_report(&fan).map_err(|e| InputError(e.to_string()))?;
    let mut outputs = to_value(&r);
    let mut gates = Vec::new();
    let mut command = format!("fano square {}", path.display());
    if with_table {
        command.push_str(" --match-table");
        let m = match_table(&r);
        outputs["table_match"] = to_value(&m);
        gates.push(Gate::expect("tuple present in the table", m != TableMatch::Inconsistent, true));
    }
    Ok(Report::new(command, &bytes, outputs, gates))
}

fn table_json(t: &MonodromyTable) -> Value {
    Value::Object(t.entries().map(|(k, p)| (k.to_string(), Value::String(p.to_string()))).collect())
}

/// `monodromy --dump`.
pub fn monodromy_dump(q: &Quintic) -> Outcome {
    let table = quintic_monodromy_table();
    let mut derived = serde_json::Map::new();
    let mut gates = Vec::new();
    for v in 0..5 {
        match q.ls.derived_table(v) {
            Ok(d) => {
                gates.push(Gate::expect(&format!("chart of vertex {v} reproduces the table"), d == table, true));
                derived.insert(v.to_string(), table_json(&d));
            }
            Err(e) => gates.push(Gate::error(&format!("chart of vertex {v}"), e)),
        }
    }
    let outputs = json!({ "table": table_json(&table), "derived": derived });
    Ok(Report::new("monodromy --dump", &quintic_inputs(""), outputs, gates))
}

fn prefixed(prefix: &str, gates: Vec<Gate>) -> Vec<Gate> {
    gates.into_iter().map(|g| Gate { name: format!("{prefix}: {}", g.name), ..g }).collect()
}

fn local_model_gates(ls: &LocalSystem) -> Vec<Gate> {
    let mut gates = Vec::new();
    match hexagon_region(ls, 0, &hexagon_centers(ls, 0)[0]) {
        Ok(h) => gates.push(Gate::expect("hexagon H_1", h.h1(), AbelianGroup::new(3, &[2]))),
        Err(e) => gates.push(Gate::error("hexagon H_1", e)),
    }
    match hexagon_union(ls, 0, 6) {
        Ok(h) => gates.push(Gate::expect("glued face H_1", h.h1(), AbelianGroup::new(9, &[2]))),
        Err(e) => gates.push(Gate::error("glued face H_1", e)),
    }
    let face = local_cohomology(&face_region(ls, 0));
    gates.push(Gate::expect("face H^1", face.h1_z, AbelianGroup::free(12)));
    gates.push(Gate::expect("face H^2", face.h2_z, z2(6)));
    match pair_region(ls, 0, 0) {
        Ok(p) => {
            gates.push(Gate::expect("pair H^1", local_cohomology(&p).h1_z, AbelianGroup::free(8)));
            let counts = (
                cell_region(ls, 0).component_count(),
                face_region(ls, 0).component_count(),
                edge_region(ls, 0).component_count(),
                p.component_count(),
            );
            gates.push(Gate::expect("component counts", format!("{counts:?}"), "(7, 4, 4, 5)"));
        }
        Err(e) => gates.push(Gate::error("pair", e)),
    }
    gates
}

fn toric_gates() -> Vec<Gate> {
    let mut gates = Vec::new();
    for (name, fan, want) in [
        ("projective 4-space", Fan::projective4(), (1, 126, 1, 0)),
        ("product of four lines", Fan::p1_fourfold(), (4, 81, 0, 4)),
        ("line times 3-space", Fan::p1_times_p3(), (2, 105, 0, 2)),
    ] {
        match square_report(&fan) {
            Ok(r) => {
                gates.push(Gate::expect(name, format!("{:?}", r.tuple()), format!("{want:?}")));
                gates.push(Gate::expect(
                    &format!("{name} in table"),
                    match_table(&r) != TableMatch::Inconsistent,
                    true,
                ));
            }
            Err(e) => gates.push(Gate::error(name, e)),
        }
    }
    gates
}

fn property_gates(ls: &LocalSystem, model: &CechModel<'_>) -> Vec<Gate> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut bad = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = SparseIntMatrix::from_dense(c, &rows).expect("rectangular");
        bad += usize::from(smith_normal_form(&m).verify(&m).is_err());
    }
    let mut complexes = true;
    for ring in [Ring::Z, Ring::Z2] {
        complexes &= bottom_row_complex(model, ring).map(|c| c.check_complex().is_ok()).unwrap_or(false);
        complexes &= h1_row_complex(model, ring).map(|c| c.check_complex().is_ok()).unwrap_or(false);
    }
    let mut uct = true;
    for (k, level) in model.nerve().by_degree.iter().enumerate() {
        for i in 0..level.len() {
            let r = model.region(k, i);
            complexes &= r.boundary2().mul(&r.boundary1()).map(|p| p.is_zero()).unwrap_or(false);
            uct &= local_cohomology(r).uct_consistent();
        }
    }
    for f in 0..ls.base().faces().len() {
        for c in hexagon_centers(ls, f) {
            uct &= hexagon_region(ls, f, &c).map(|r| local_cohomology(&r).uct_consistent()).unwrap_or(false);
        }
    }
    vec![
        Gate::expect("Smith forms failing their identities", bad, 0),
        Gate::expect("delta squared vanishes", complexes, true),
        match model.check_orbit_refinement() {
            Ok(n) => Gate::expect("orbit refinement inclusions checked", n, 1070),
            Err(e) => Gate::error("orbit refinement", e),
        },
        Gate::expect("universal coefficients on every local model", uct, true),
    ]
}

fn agreement_gates(ls: &LocalSystem, model: &CechModel<'_>) -> Vec<Gate> {
    let cech = bottom_row_complex(model, Ring::Z).and_then(|c| c.cohomology()).map(|h| h[2].clone());
    let heegaard = HeegaardOracle::new(ls, Monodromy::Quintic).and_then(|o| o.run(0)).map(|r| r.h1);
    match (cech, heegaard) {
        (Ok(a), Ok(b)) => vec![
            Gate::expect("Cech H^2", &a, z2(1)),
            Gate::expect("Heegaard H_1", &b, z2(1)),
            Gate::expect("the two agree", a == b, true),
        ],
        (Err(e), _) | (_, Err(e)) => vec![Gate::error("cross-oracle agreement", e)],
    }
}

/// `verify --all`: every gate, in a fixed order.
pub fn verify_all(q: &Quintic) -> Outcome {
    let inputs = quintic_inputs("verify");
    let model = match model_or_gate(q, "model") {
        Ok(m) => m,
        Err(g) => return Ok(Report::new("verify --all", &inputs, Value::Null, vec![g])),
    };
    let ls = q.ls;
    let page = |ring| e2_page(model, ring).map(|p| page_gates(&p)).unwrap_or_else(|e| vec![Gate::error("E2 page", e)]);
    let sections: Vec<(&str, Vec<Gate>)> = vec![
        ("mod-2 E2 page", page(Ring::Z2)),
        ("integral E2 page", page(Ring::Z)),
        ("bottom row", bottom_row_gates(model, Ring::Z).1),
        ("totalized cohomology", [betti_gates(model, Ring::Z2).1, betti_gates(model, Ring::Z).1].concat()),
        ("lattice point correspondence", correspondence_gates(model).1),
        ("local models", local_model_gates(ls)),
        ("Heegaard oracle", heegaard_gates(ls, 0, false).1),
        ("toric square", toric_gates()),
        ("property suites", property_gates(ls, model)),
        ("cross-oracle agreement", agreement_gates(ls, model)),
    ];
    let summary: Vec<Value> = sections
        .iter()
        .enumerate()
        .map(|(i, (name, gates))| json!({ "criterion": i + 1, "name": name, "pass": gates.iter().all(|g| g.pass) }))
        .collect();
    let gates =
        sections.into_iter().enumerate().flat_map(|(i, (name, g))| prefixed(&format!("{} {name}", i + 1), g)).collect();
    Ok(Report::new("verify --all", &inputs, json!({ "criteria": summary }), gates))
}
