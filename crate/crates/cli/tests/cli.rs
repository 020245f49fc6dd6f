//! End-to-end tests of the binary: exit codes, table shapes, round trips,
//! guardrails, environment overrides, and SVG determinism.

use std::process::{Command, Output};

use alcove_cli::records::{
    parse_adm_json, parse_kottwitz_json, parse_strata_json, parse_testfn_json,
};

fn alcove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(args)
        .env_remove("ALCOVE_OUT_DIR")
        .env_remove("ALCOVE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn adm_d3_emits_seven_records_and_round_trips() {
    let out = alcove(&["adm", "--d", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let records = parse_adm_json(out.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), 7);
    let reemitted = alcove_cli::records::emit_adm_json(&records);
    assert_eq!(reemitted.trim(), stdout(&out).trim());
}

#[test]
fn adm_d0_is_a_usage_error() {
    let out = alcove(&["adm", "--d", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("Usage"), "usage text must reach stderr");
    assert!(stdout(&out).is_empty());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = alcove(&["adm", "--d", "3", "--no-such-flag"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).to_lowercase().contains("usage"));
}

#[test]
fn guardrails_refuse_without_force() {
    let out = alcove(&["adm", "--d", "9"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--force"));
    let out = alcove(&["adm", "--d", "9", "--force"]);
    assert_eq!(code(&out), 0);
    let records = parse_adm_json(out.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), (1 << 9) - 1);

    let out = alcove(&["kottwitz", "--d", "5"]);
    assert_eq!(code(&out), 2);
    let out = alcove(&["testfn", "--d", "3", "--p", "101", "--r", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn csv_headers_are_fixed() {
    let adm = stdout(&alcove(&["adm", "--d", "2", "--format", "csv"]));
    assert!(adm.starts_with("lambda,perm,length,s,codim\n"));
    let strata = stdout(&alcove(&["strata", "--d", "2", "--format", "csv"]));
    assert!(strata.starts_with("s,codim,lambda,perm\n"));
    let kw = stdout(&alcove(&["kottwitz", "--d", "2", "--format", "csv"]));
    assert!(kw.starts_with("lambda,perm,s,k\n"));
    let tf = stdout(&alcove(&["testfn", "--d", "1", "--p", "3", "--format", "csv"]));
    assert!(tf.lines().nth(1).unwrap() == "t,lambda,perm,value");
}

#[test]
fn kottwitz_stratum_sizes_match_the_block_structure() {
    let three = alcove(&["kottwitz", "--d", "3", "--blocks", "1;2,3", "--nu", "2"]);
    assert_eq!(parse_kottwitz_json(three.stdout.as_slice()).unwrap().len(), 3);
    let seven = alcove(&["kottwitz", "--d", "3"]);
    assert_eq!(parse_kottwitz_json(seven.stdout.as_slice()).unwrap().len(), 7);
    let one = alcove(&["kottwitz", "--d", "3", "--blocks", "1;2;3", "--nu", "2"]);
    let records = parse_kottwitz_json(one.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].k, "1");
    assert_eq!(records[0].s, vec![2]);
}

#[test]
fn strata_round_trips_and_dot_lists_covers() {
    let out = alcove(&["strata", "--d", "3"]);
    let doc = parse_strata_json(out.stdout.as_slice()).unwrap();
    assert_eq!(doc.strata.len(), 7);
    assert_eq!(doc.covers.len(), 9, "C(3,1)·2 + C(3,2)·1 cover relations");
    assert_eq!(
        alcove_cli::records::emit_strata_json(&doc).trim(),
        stdout(&out).trim()
    );
    let dot = stdout(&alcove(&["strata", "--d", "3", "--format", "dot"]));
    assert!(dot.starts_with("digraph strata {"));
    assert_eq!(dot.matches(" -> ").count(), 9);
}

#[test]
fn testfn_table_round_trips_with_the_expected_rotation_value() {
    let out = alcove(&["testfn", "--d", "2", "--p", "3", "--r", "1"]);
    assert_eq!(code(&out), 0);
    let doc = parse_testfn_json(out.stdout.as_slice()).unwrap();
    assert_eq!(doc.measure, "I+");
    assert_eq!(doc.modulus, 2);
    assert_eq!(doc.entries.len(), 8);
    let tau_entry = doc
        .entries
        .iter()
        .find(|e| e.t == [0, 0] && e.lambda == [-1, 0] && e.perm == [2, 1])
        .expect("rotation coefficient present");
    assert_eq!(tau_entry.value, "-1/2");
    assert_eq!(
        alcove_cli::records::emit_testfn_json(&doc).trim(),
        stdout(&out).trim()
    );

    // The sum route agrees with the closed form through the CLI as well.
    let sum = alcove(&["testfn", "--d", "2", "--p", "3", "--r", "1", "--sum"]);
    assert_eq!(stdout(&sum), stdout(&out));
}

#[test]
fn testfn_chi_table_uses_iwahori_measure() {
    let out = alcove(&["testfn", "--d", "2", "--p", "3", "--chi", "0,0"]);
    let doc = parse_testfn_json(out.stdout.as_slice()).unwrap();
    assert_eq!(doc.measure, "I");
    assert!(!doc.entries.is_empty());
    let bad = alcove(&["testfn", "--d", "2", "--p", "3", "--chi", "0,0,1"]);
    assert_eq!(code(&bad), 2);
    let bad = alcove(&["testfn", "--d", "2", "--p", "4", "--chi", "0,0"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn verify_suites_pass_and_reject_unknown_names() {
    let out = alcove(&["verify", "--suite", "all", "--d", "3", "--p", "3", "--r", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().count() >= 8);
    assert!(text.lines().all(|l| l.starts_with("ok ")));

    let out = alcove(&["verify", "--suite", "bogus"]);
    assert_eq!(code(&out), 2);

    let out = alcove(&["verify", "--suite", "hecke", "--d", "5"]);
    assert_eq!(code(&out), 2, "symbolic guardrail applies to verify too");
}

#[test]
fn verify_seed_env_is_honored_and_validated() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_alcove"));
        cmd.args(["verify", "--suite", "spectral", "--d", "2", "--p", "3", "--r", "1"]);
        match seed {
            Some(s) => cmd.env("ALCOVE_SEED", s),
            None => cmd.env_remove("ALCOVE_SEED"),
        };
        cmd.output().unwrap()
    };
    let a = run(Some("7"));
    assert_eq!(code(&a), 0);
    let b = run(Some("7"));
    assert_eq!(stdout(&a), stdout(&b), "same seed, same report");
    let bad = run(Some("not-a-number"));
    assert_eq!(code(&bad), 2);
}

#[test]
fn lfactor_prints_exact_polynomials() {
    let out = alcove(&["lfactor", "--d", "2", "--p", "3", "--eta", "1,1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("numerator: 1\n"));
    assert!(text.contains("denominator: 1 + (-2)*u + 1*u^2\n"));
    assert!(text.contains("series: 1 + 2*u + 3*u^2"));

    let trivial = alcove(&["lfactor", "--d", "2", "--p", "3", "--chi", "1,1", "--eta", "2,3"]);
    let text = stdout(&trivial);
    assert!(text.contains("denominator: 1\n"));

    let bad = alcove(&["lfactor", "--d", "2", "--p", "3", "--eta", "0,1"]);
    assert_eq!(code(&bad), 2, "non-invertible parameters are rejected");
}

#[test]
fn svg_is_deterministic_with_the_documented_dark_counts() {
    let case = |args: &[&str]| stdout(&alcove(args));
    let a = case(&["alcove-svg", "--blocks", "1;2,3", "--nu", "2"]);
    let b = case(&["alcove-svg", "--blocks", "1;2,3", "--nu", "2"]);
    assert_eq!(a, b, "byte-identical across runs");
    assert_eq!(a.matches("class=\"dark\"").count(), 3);
    assert_eq!(a.matches("<polygon").count(), 7);
    assert_eq!(a.matches("<circle").count(), 3);
    assert!(a.contains("&#964;"), "rotation label present");

    let full = case(&["alcove-svg"]);
    assert_eq!(full.matches("class=\"dark\"").count(), 7);
    let singleton = case(&["alcove-svg", "--blocks", "1;2;3", "--nu", "2"]);
    assert_eq!(singleton.matches("class=\"dark\"").count(), 1);

    let bad = alcove(&["alcove-svg", "--d", "2"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn out_dir_env_prefixes_relative_paths() {
    let dir = std::env::temp_dir().join(format!("alcove-cli-test-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(["adm", "--d", "2", "--out", "tables/adm.json"])
        .env("ALCOVE_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let written = std::fs::read(dir.join("tables/adm.json")).unwrap();
    assert_eq!(parse_adm_json(&written).unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    // A path whose parent is a regular file cannot be created.
    let out = alcove(&["adm", "--d", "2", "--out", "/proc/version/child/x.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("error"));
}
