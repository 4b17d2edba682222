use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branched-cech")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn batyrev_of_the_quintic() {
    let out = run(&["batyrev", data("quintic.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["h21"], 101);
    assert_eq!(v["outputs"]["lattice_points"], 126);
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn batyrev_of_the_cross_polytope() {
    let out = run(&["batyrev", data("cross_polytope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outputs"]["h21"], 4);
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("branched-cech-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"vertices\": [[1,2,3]]").unwrap();
    let out = run(&["batyrev", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = run(&["fano", "square", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["batyrev", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["quintic"]).status.code(), Some(2));
    assert_eq!(run(&["quintic", "e2", "--ring", "q"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["batyrev", "x", "--json", "--tsv"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_branched-cech"))
        .args(["batyrev", data("quintic.json").to_str().unwrap()])
        .env("BRANCHED_CECH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fano_square_matches_the_table() {
    let cases =
        [("projective4.json", "consistent"), ("p1_fourfold.json", "ambiguous"), ("p1_times_p3.json", "consistent")];
    for (file, status) in cases {
        let out = run(&["fano", "square", data(&format!("fans/{file}")).to_str().unwrap(), "--match-table"]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        assert_eq!(json(&out)["outputs"]["table_match"]["status"], status, "{file}");
    }
    let out = run(&["fano", "square", data("fans/projective4.json").to_str().unwrap()]);
    let v = json(&out);
    assert_eq!((v["outputs"]["h11"].clone(), v["outputs"]["h0_antik"].clone()), (1.into(), 126.into()));
}

#[test]
fn monodromy_dump_lists_twelve_entries_per_chart() {
    let out = run(&["monodromy", "--dump"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["table"].as_object().unwrap().len(), 12);
    assert_eq!(v["outputs"]["derived"].as_object().unwrap().len(), 5);
}

#[test]
fn heegaard_is_deterministic_for_a_seed() {
    let a = run(&["quintic", "heegaard", "--seed", "5", "--matrix"]);
    let b = run(&["quintic", "heegaard", "--seed", "5", "--matrix"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let m = v["outputs"]["relation_matrix"].as_str().unwrap();
    assert!(m.starts_with("120 71\n"));
}

#[test]
fn tsv_output_has_gate_lines() {
    let out = run(&["quintic", "heegaard", "--tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command\tquintic heegaard --seed 0\n"));
    assert!(text.lines().any(|l| l == "gate\tcokernel\tPASS\tZ/2"));
}

#[test]
fn mod_two_e2_page_passes() {
    let out = run(&["quintic", "e2", "--ring", "z2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outputs"]["page"]["entries"][0][2]["torsion"].as_array().unwrap().len(), 60);
}

#[test]
fn integral_page_reports_its_gate_failures() {
    let out = run(&["quintic", "e2", "--ring", "z"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["outputs"]["page"]["entries"][0][1]["free_rank"], 28);
}
