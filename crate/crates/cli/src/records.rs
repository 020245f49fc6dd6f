//! Record types behind every table the binary emits, with JSON and CSV
//! emitters and validating parsers. Emit∘parse is the identity on all of
//! them; the parsers are also the fuzzing entry points, so they must reject
//! malformed input with an error rather than panicking.
//!
//! CSV layout: vector-valued cells join their entries with single spaces, so
//! no quoting is needed; column orders are fixed and documented in --help.

use alcove_core::admissible::{adm_set, codim, critical_indices, levi_adm, strata_poset, LeviDatum};
use alcove_core::depthzero::DepthZeroChar;
use alcove_core::hecke::Algebra;
use alcove_core::perm::Perm;
use alcove_core::scalar::parse_scalar;
use alcove_core::testfcn::{phi_chi, phi_one_explicit, phi_one_sum, TestFunction};
use alcove_core::weyl::{ExtAffElem, WeylCtx};
use serde::{Deserialize, Serialize};

/// One admissible element. CSV columns: lambda, perm, length, s, codim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmRecord {
    pub lambda: Vec<i64>,
    pub perm: Vec<u32>,
    pub length: usize,
    pub s: Vec<usize>,
    pub codim: usize,
}

/// One stratum of the admissible stratification with its central-function value.
/// CSV columns: lambda, perm, s, k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KottwitzRecord {
    pub lambda: Vec<i64>,
    pub perm: Vec<u32>,
    pub s: Vec<usize>,
    pub k: String,
}

/// The stratification poset: strata plus cover relations (indices into
/// `strata`, smaller stratum first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataDoc {
    pub d: usize,
    pub strata: Vec<AdmRecord>,
    pub covers: Vec<(usize, usize)>,
}

/// One test-function coefficient: torus logs, group element, scalar value.
/// CSV columns: t, lambda, perm, value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFnRecord {
    pub t: Vec<u64>,
    pub lambda: Vec<i64>,
    pub perm: Vec<u32>,
    pub value: String,
}

/// A full test-function table. The scalar modulus appears once here rather
/// than per value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFnDoc {
    pub p: u64,
    pub r: u32,
    pub d: usize,
    pub measure: String,
    pub modulus: u32,
    pub entries: Vec<TestFnRecord>,
}

fn elem_to_parts(w: &ExtAffElem) -> (Vec<i64>, Vec<u32>) {
    (w.lambda().to_vec(), w.perm().one_line_1indexed())
}

// Bounds on decoded records. Length recomputation works on barycenters with
// denominator d, so coordinates must stay well inside i64 range.
const MAX_RECORD_RANK: usize = 512;
const MAX_RECORD_COORD: i64 = 1_000_000_000;

fn parts_to_elem(lambda: &[i64], perm: &[u32]) -> Result<ExtAffElem, String> {
    if lambda.is_empty() || lambda.len() > MAX_RECORD_RANK {
        return Err(format!("rank {} out of range", lambda.len()));
    }
    if lambda.len() != perm.len() {
        return Err(format!(
            "lambda has {} entries but perm has {}",
            lambda.len(),
            perm.len()
        ));
    }
    if let Some(x) = lambda.iter().find(|x| x.unsigned_abs() > MAX_RECORD_COORD as u64) {
        return Err(format!("coordinate {x} out of range"));
    }
    let p = Perm::from_one_line_1indexed(perm).map_err(|e| e.to_string())?;
    ExtAffElem::new(lambda.to_vec(), p).map_err(|e| e.to_string())
}

// -- builders -----------------------------------------------------------------

pub fn adm_records(d: usize) -> Result<Vec<AdmRecord>, String> {
    let ctx = WeylCtx::gl(d);
    let mut out = Vec::new();
    for w in adm_set(&ctx) {
        let s = critical_indices(&ctx, &w).map_err(|e| e.to_string())?;
        let (lambda, perm) = elem_to_parts(&w);
        out.push(AdmRecord {
            lambda,
            perm,
            length: ctx.length(&w),
            s: s.indices().to_vec(),
            codim: codim(&ctx, &w).map_err(|e| e.to_string())?,
        });
    }
    Ok(out)
}

pub fn strata_doc(d: usize) -> StrataDoc {
    let ctx = WeylCtx::gl(d);
    let poset = strata_poset(d);
    let strata = poset
        .strata
        .iter()
        .map(|st| {
            let (lambda, perm) = elem_to_parts(&st.w);
            AdmRecord {
                lambda,
                perm,
                length: ctx.length(&st.w),
                s: st.s.clone(),
                codim: st.codim,
            }
        })
        .collect();
    StrataDoc {
        d,
        strata,
        covers: poset.covers,
    }
}

pub fn kottwitz_records(levi: &LeviDatum, nu: &[i64]) -> Result<Vec<KottwitzRecord>, String> {
    let gctx = WeylCtx::gl(levi.d);
    let malg = Algebra::new(levi.ctx(), 1);
    let k = malg.k_mu(nu).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for w in levi_adm(levi, nu).map_err(|e| e.to_string())? {
        let s = critical_indices(&gctx, &w).map_err(|e| e.to_string())?;
        let (lambda, perm) = elem_to_parts(&w);
        out.push(KottwitzRecord {
            lambda,
            perm,
            s: s.indices().to_vec(),
            k: k.coeff(&w).to_string(),
        });
    }
    Ok(out)
}

pub fn testfn_doc(f: &TestFunction) -> TestFnDoc {
    let entries = f
        .coeffs()
        .iter()
        .map(|((t, u), v)| {
            let (lambda, perm) = elem_to_parts(u);
            TestFnRecord {
                t: t.clone(),
                lambda,
                perm,
                value: v.to_string(),
            }
        })
        .collect();
    TestFnDoc {
        p: f.p(),
        r: f.r(),
        d: f.d(),
        measure: f.measure().name().to_string(),
        modulus: f.scalar_modulus(),
        entries,
    }
}

/// φ_{r,χ} for an explicit character, or φ_{r,1} (closed form by default,
/// character sum on request).
pub fn build_test_function(
    p: u64,
    r: u32,
    d: usize,
    chi: Option<&[i64]>,
    by_sum: bool,
) -> Result<TestFunction, String> {
    match chi {
        Some(exps) => {
            if exps.len() != d {
                return Err(format!("--chi has {} entries, expected d={}", exps.len(), d));
            }
            let chi = DepthZeroChar::new(p, exps).map_err(|e| e.to_string())?;
            phi_chi(p, r, &chi).map_err(|e| e.to_string())
        }
        None if by_sum => phi_one_sum(p, r, d).map_err(|e| e.to_string()),
        None => phi_one_explicit(p, r, d).map_err(|e| e.to_string()),
    }
}

// -- JSON ----------------------------------------------------------------------

pub fn emit_adm_json(records: &[AdmRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn parse_adm_json(bytes: &[u8]) -> Result<Vec<AdmRecord>, String> {
    let records: Vec<AdmRecord> = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    for rec in &records {
        let w = parts_to_elem(&rec.lambda, &rec.perm)?;
        let ctx = WeylCtx::gl(w.d());
        if ctx.length(&w) != rec.length {
            return Err(format!("length field {} is wrong for {:?}", rec.length, w));
        }
        if rec.s.is_empty() || rec.codim != rec.s.len() - 1 {
            return Err("codim must be |s| − 1 with s nonempty".into());
        }
    }
    Ok(records)
}

pub fn emit_strata_json(doc: &StrataDoc) -> String {
    serde_json::to_string_pretty(doc).expect("records serialize")
}

pub fn parse_strata_json(bytes: &[u8]) -> Result<StrataDoc, String> {
    let doc: StrataDoc = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    for rec in &doc.strata {
        parts_to_elem(&rec.lambda, &rec.perm)?;
        if rec.lambda.len() != doc.d {
            return Err("stratum rank differs from the document rank".into());
        }
    }
    let n = doc.strata.len();
    for &(a, b) in &doc.covers {
        if a >= n || b >= n {
            return Err(format!("cover ({a},{b}) points outside the strata list"));
        }
    }
    Ok(doc)
}

pub fn emit_kottwitz_json(records: &[KottwitzRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn parse_kottwitz_json(bytes: &[u8]) -> Result<Vec<KottwitzRecord>, String> {
    let records: Vec<KottwitzRecord> = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    for rec in &records {
        parts_to_elem(&rec.lambda, &rec.perm)?;
        parse_scalar(1, &rec.k).map_err(|e| format!("bad k value {:?}: {e}", rec.k))?;
    }
    Ok(records)
}

pub fn emit_testfn_json(doc: &TestFnDoc) -> String {
    serde_json::to_string_pretty(doc).expect("records serialize")
}

pub fn parse_testfn_json(bytes: &[u8]) -> Result<TestFnDoc, String> {
    let doc: TestFnDoc = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    if doc.measure != "I" && doc.measure != "I+" {
        return Err(format!("unknown measure tag {:?}", doc.measure));
    }
    for rec in &doc.entries {
        let w = parts_to_elem(&rec.lambda, &rec.perm)?;
        if w.d() != doc.d || rec.t.len() != doc.d {
            return Err("entry rank differs from the document rank".into());
        }
        parse_scalar(doc.modulus, &rec.value)
            .map_err(|e| format!("bad value {:?}: {e}", rec.value))?;
    }
    Ok(doc)
}

// -- CSV -----------------------------------------------------------------------

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_adm_csv(records: &[AdmRecord]) -> String {
    let mut out = String::from("lambda,perm,length,s,codim\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            join(&r.lambda),
            join(&r.perm),
            r.length,
            join(&r.s),
            r.codim
        ));
    }
    out
}

pub fn emit_strata_csv(doc: &StrataDoc) -> String {
    let mut out = String::from("s,codim,lambda,perm\n");
    for r in &doc.strata {
        out.push_str(&format!(
            "{},{},{},{}\n",
            join(&r.s),
            r.codim,
            join(&r.lambda),
            join(&r.perm)
        ));
    }
    out
}

pub fn emit_kottwitz_csv(records: &[KottwitzRecord]) -> String {
    let mut out = String::from("lambda,perm,s,k\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            join(&r.lambda),
            join(&r.perm),
            join(&r.s),
            r.k
        ));
    }
    out
}

pub fn emit_testfn_csv(doc: &TestFnDoc) -> String {
    let mut out = format!(
        "# p={} r={} d={} measure={} modulus={}\nt,lambda,perm,value\n",
        doc.p, doc.r, doc.d, doc.measure, doc.modulus
    );
    for r in &doc.entries {
        out.push_str(&format!(
            "{},{},{},{}\n",
            join(&r.t),
            join(&r.lambda),
            join(&r.perm),
            r.value
        ));
    }
    out
}

// -- DOT -----------------------------------------------------------------------

/// The stratification poset as a DOT digraph: nodes are critical sets, edges
/// point from a stratum to each one-step degeneration.
pub fn emit_strata_dot(doc: &StrataDoc) -> String {
    let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
    for (i, r) in doc.strata.iter().enumerate() {
        out.push_str(&format!(
            "  n{} [label=\"S={{{}}} codim {}\"];\n",
            i,
            join(&r.s),
            r.codim
        ));
    }
    for &(a, b) in &doc.covers {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// Comma-separated integer exponents, as passed to --chi.
pub fn parse_chi_arg(s: &str) -> Result<Vec<i64>, String> {
    if s.trim().is_empty() {
        return Err("empty character exponent list".into());
    }
    let mut out = Vec::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        out.push(
            piece
                .parse::<i64>()
                .map_err(|_| format!("bad exponent {piece:?}"))?,
        );
    }
    if out.len() > 64 {
        return Err("more than 64 exponents".into());
    }
    Ok(out)
}

/// Comma-separated scalar strings, as passed to --eta.
pub fn parse_eta_arg(m: u32, s: &str) -> Result<Vec<alcove_core::scalar::Scalar>, String> {
    if s.trim().is_empty() {
        return Err("empty parameter list".into());
    }
    s.split(',')
        .map(|piece| parse_scalar(m, piece.trim()).map_err(|e| e.to_string()))
        .collect()
}
