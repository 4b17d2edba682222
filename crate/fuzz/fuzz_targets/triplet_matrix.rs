#![no_main]

use branched_cech::exact_linalg::{dump_triplets, parse_triplets};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse_triplets(s) {
            let again = parse_triplets(&dump_triplets(&m)).expect("dumped matrices parse");
            assert_eq!(m, again);
        }
    }
});
