#![no_main]

use branched_cech::toric_square::Fan;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(fan) = Fan::from_json(s) {
            let again = Fan::from_json(&fan.to_json()).expect("serialized fans parse");
            assert_eq!(fan, again);
        }
    }
});
