#![no_main]

use libfuzzer_sys::fuzz_target;

use alcove_cli::records as r;

// Every JSON document decoder exported by the CLI, driven on the same bytes.
// Whatever validates must survive an emit/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    if let Ok(recs) = r::parse_adm_json(data) {
        let again = r::parse_adm_json(r::emit_adm_json(&recs).as_bytes()).expect("round trip");
        assert_eq!(again, recs);
    }
    if let Ok(doc) = r::parse_strata_json(data) {
        let again =
            r::parse_strata_json(r::emit_strata_json(&doc).as_bytes()).expect("round trip");
        assert_eq!(again, doc);
    }
    if let Ok(recs) = r::parse_kottwitz_json(data) {
        let again =
            r::parse_kottwitz_json(r::emit_kottwitz_json(&recs).as_bytes()).expect("round trip");
        assert_eq!(again, recs);
    }
    if let Ok(doc) = r::parse_testfn_json(data) {
        let again =
            r::parse_testfn_json(r::emit_testfn_json(&doc).as_bytes()).expect("round trip");
        assert_eq!(again, doc);
    }
});
