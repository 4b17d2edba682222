#![no_main]

use branched_cech::lattice::LatticePolytope;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = LatticePolytope::from_json(s);
    }
});
