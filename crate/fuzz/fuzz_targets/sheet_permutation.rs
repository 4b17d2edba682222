#![no_main]

use branched_cech::monodromy::SheetPermutation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = SheetPermutation::parse(s) {
            let again = SheetPermutation::parse(&p.to_string()).expect("displayed permutations parse");
            assert_eq!(p, again);
        }
    }
});
