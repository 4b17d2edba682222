//! Replays the checked-in fuzz corpus through the parsers with the same
//! properties the fuzz targets assert, so regressions surface on stable.

use std::fs;
use std::path::PathBuf;

use branched_cech::exact_linalg::{dump_triplets, parse_triplets};
use branched_cech::lattice::LatticePolytope;
use branched_cech::monodromy::SheetPermutation;
use branched_cech::toric_square::Fan;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter_map(|p| {
            let text = String::from_utf8(fs::read(&p).unwrap()).ok()?;
            Some((p.file_name().unwrap().to_string_lossy().into_owned(), text))
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn polytope_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("polytope_json") {
        if LatticePolytope::from_json(&text).is_ok() {
            accepted += 1;
        } else {
            assert!(["empty.json", "short_vertex.json"].contains(&name.as_str()), "{name} rejected");
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn fan_seeds_round_trip() {
    for (name, text) in seeds("fan_json") {
        match Fan::from_json(&text) {
            Ok(fan) => assert_eq!(Fan::from_json(&fan.to_json()).unwrap(), fan, "{name}"),
            Err(_) => assert_eq!(name, "cone_out_of_range.json"),
        }
    }
}

#[test]
fn triplet_seeds_round_trip() {
    for (name, text) in seeds("triplet_matrix") {
        match parse_triplets(&text) {
            Ok(m) => assert_eq!(parse_triplets(&dump_triplets(&m)).unwrap(), m, "{name}"),
            Err(_) => assert!(["repeated.txt", "huge_header.txt"].contains(&name.as_str()), "{name} rejected"),
        }
    }
}

#[test]
fn permutation_seeds_round_trip() {
    for (name, text) in seeds("sheet_permutation") {
        match SheetPermutation::parse(&text) {
            Ok(p) => assert_eq!(SheetPermutation::parse(&p.to_string()).unwrap(), p, "{name}"),
            Err(_) => assert!(["repeated.txt", "unclosed.txt"].contains(&name.as_str()), "{name} rejected"),
        }
    }
}
