#![no_main]

use libfuzzer_sys::fuzz_target;

// Command-line list parsers (--chi and --eta). The first byte picks the
// cyclotomic context for the eta path; the rest is the raw argument text.
// Successful parses must survive a join/re-parse round trip.
const CONTEXTS: [u32; 4] = [1, 2, 4, 12];

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(exps) = alcove_cli::records::parse_chi_arg(text) {
        let joined = exps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(alcove_cli::records::parse_chi_arg(&joined), Ok(exps));
    }
    let m = CONTEXTS[sel as usize % CONTEXTS.len()];
    if let Ok(etas) = alcove_cli::records::parse_eta_arg(m, text) {
        // Canonical scalar strings never contain a comma, so joining is safe.
        let joined = etas.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let back = alcove_cli::records::parse_eta_arg(m, &joined).expect("canonical form re-parses");
        assert_eq!(back, etas);
    }
});
