#![no_main]

use libfuzzer_sys::fuzz_target;

// JSON decoding of one extended affine element. Anything that parses must
// survive a serialize/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    if let Ok(w) = alcove_core::weyl::parse_elem_json(data) {
        let bytes = serde_json::to_vec(&w).expect("parsed element serializes");
        let back = alcove_core::weyl::parse_elem_json(&bytes).expect("round trip parses");
        assert_eq!(back, w);
    }
});
