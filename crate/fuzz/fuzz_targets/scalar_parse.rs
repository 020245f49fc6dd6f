#![no_main]

use libfuzzer_sys::fuzz_target;

// Scalar expression parser. The first byte picks the cyclotomic context so
// seeds stay readable; the rest is the candidate text. Anything that parses
// must print canonically and re-parse to the same value.
const CONTEXTS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let m = CONTEXTS[sel as usize % CONTEXTS.len()];
    if let Ok(x) = alcove_core::scalar::parse_scalar(m, text) {
        let printed = x.to_string();
        let back =
            alcove_core::scalar::parse_scalar(m, &printed).expect("canonical form re-parses");
        assert_eq!(back, x);
    }
});
