//! Thin dispatcher over the library: argument parsing, guardrails, output
//! plumbing, and exit codes (0 success, 1 verification failure, 2 usage
//! error). Everything computational lives in alcove-cli's library modules
//! and alcove-core.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alcove_cli::figure::{rank3_picture, render_svg};
use alcove_cli::records::{
    adm_records, build_test_function, emit_adm_csv, emit_adm_json, emit_kottwitz_csv,
    emit_kottwitz_json, emit_strata_csv, emit_strata_dot, emit_strata_json, emit_testfn_csv,
    emit_testfn_json, kottwitz_records, parse_chi_arg, parse_eta_arg, strata_doc, testfn_doc,
};
use alcove_cli::suites::{run_suite, SuiteConfig};
use alcove_core::admissible::LeviDatum;
use alcove_core::depthzero::DepthZeroChar;
use alcove_core::testfcn::{lss_factor, LanglandsParamData};
use clap::{Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
CSV column orders (vector cells join entries with single spaces):
  adm:      lambda, perm, length, s, codim
  strata:   s, codim, lambda, perm
  kottwitz: lambda, perm, s, k
  testfn:   t, lambda, perm, value   (header comment carries p, r, d, measure, modulus)

Scalars print canonically: polynomials in q when every exponent is even,
otherwise in v (v^2 = q); rationals as a/b; root-of-unity residues as
polynomials in z, with the modulus stated once per table.

Environment:
  ALCOVE_OUT_DIR  directory prefixed to relative --out paths
  ALCOVE_SEED     seed for the randomized verification suites

Desk-scale guardrails (override with --force): d <= 8 for adm and strata,
d <= 4 for symbolic Hecke products, (p-1)^d <= 10^6 for the character-sum
route, (p^r-1)^d <= 10^6 for test-function tables.";

#[derive(Parser)]
#[command(
    name = "alcove",
    version,
    about = "Exact alcove combinatorics, central Hecke elements, and depth-zero test functions for GL(d)",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the admissible set with lengths, critical indices, codimensions
    Adm {
        /// Rank, the d of GL(d)
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the desk-scale guardrails
        #[arg(long)]
        force: bool,
    },
    /// Emit the stratification poset (JSON, CSV, or DOT cover graph)
    Strata {
        /// Rank, the d of GL(d)
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the desk-scale guardrails
        #[arg(long)]
        force: bool,
    },
    /// Central-function values on a stratum, symbolic in q
    Kottwitz {
        /// Rank, the d of GL(d)
        #[arg(long)]
        d: usize,
        /// Block partition, e.g. "1;2,3" (defaults to one block)
        #[arg(long)]
        blocks: Option<String>,
        /// Basis coordinate of the orbit vector (1-indexed, defaults to 1)
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the desk-scale guardrails
        #[arg(long)]
        force: bool,
    },
    /// Coefficient table of a depth-zero test function
    Testfn {
        /// Rank, the d of GL(d)
        #[arg(long)]
        d: usize,
        /// Residue characteristic (an odd prime)
        #[arg(long)]
        p: u64,
        /// Congruence level exponent; tables are p^r-periodic in t
        #[arg(long, default_value = "1")]
        r: u32,
        /// Character exponents, e.g. "0,0,1"; omitted = level-1 function
        #[arg(long)]
        chi: Option<String>,
        /// Build the level-1 function by the character sum instead of the
        /// closed form
        #[arg(long)]
        sum: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the desk-scale guardrails
        #[arg(long)]
        force: bool,
    },
    /// Run a verification suite; nonzero exit on any failed identity
    Verify {
        /// One of: all, adm, hecke, testfn, spectral
        #[arg(long, default_value = "all")]
        suite: String,
        /// Rank the suites run at
        #[arg(long, default_value = "3")]
        d: usize,
        /// Residue characteristic the suites run at
        #[arg(long, default_value = "3")]
        p: u64,
        /// Congruence level exponent the suites run at
        #[arg(long, default_value = "1")]
        r: u32,
        /// Override the desk-scale guardrails
        #[arg(long)]
        force: bool,
    },
    /// Semi-simple local L-factor for a character and Satake parameters
    Lfactor {
        /// Rank, the d of GL(d)
        #[arg(long)]
        d: usize,
        /// Residue characteristic (an odd prime)
        #[arg(long)]
        p: u64,
        /// Character exponents (defaults to the trivial character)
        #[arg(long)]
        chi: Option<String>,
        /// Comma-separated exact scalars, e.g. "1,-3/2"
        #[arg(long)]
        eta: String,
        /// Congruence level exponent
        #[arg(long, default_value = "1")]
        r: u32,
        /// Truncation order for the certified series expansion
        #[arg(long, default_value = "6")]
        order: usize,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-3 SVG picture of the admissible alcoves and a chosen stratum
    AlcoveSvg {
        /// Rank; the picture is only defined for d = 3
        #[arg(long, default_value = "3")]
        d: usize,
        /// Block partition, e.g. "1;2,3" (defaults to one block)
        #[arg(long)]
        blocks: Option<String>,
        /// Basis coordinate of the orbit vector (1-indexed, defaults to 1)
        #[arg(long)]
        nu: Option<usize>,
        /// Write here instead of stdout (ALCOVE_OUT_DIR prefixes relative paths)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            let mut cmd = <Cli as clap::CommandFactory>::command();
            eprintln!("{}", cmd.render_usage());
            eprintln!("For more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Adm { d, format, out, force } => {
            validate_d(d)?;
            guard(force, "d", d as u128, 8)?;
            let records = adm_records(d).map_err(Failure::Run)?;
            let text = match format {
                Format::Json => emit_adm_json(&records),
                Format::Csv => emit_adm_csv(&records),
                Format::Dot => return Err(usage("DOT output is only available for strata")),
            };
            write_output(out.as_deref(), &text)
        }
        Cmd::Strata { d, format, out, force } => {
            validate_d(d)?;
            guard(force, "d", d as u128, 8)?;
            let doc = strata_doc(d);
            let text = match format {
                Format::Json => emit_strata_json(&doc),
                Format::Csv => emit_strata_csv(&doc),
                Format::Dot => emit_strata_dot(&doc),
            };
            write_output(out.as_deref(), &text)
        }
        Cmd::Kottwitz {
            d,
            blocks,
            nu,
            format,
            out,
            force,
        } => {
            validate_d(d)?;
            guard(force, "d (symbolic products)", d as u128, 4)?;
            let levi = parse_levi(d, blocks.as_deref())?;
            let nu = parse_nu(&levi, nu)?;
            let records = kottwitz_records(&levi, &nu).map_err(usage)?;
            let text = match format {
                Format::Json => emit_kottwitz_json(&records),
                Format::Csv => emit_kottwitz_csv(&records),
                Format::Dot => return Err(usage("DOT output is only available for strata")),
            };
            write_output(out.as_deref(), &text)
        }
        Cmd::Testfn {
            d,
            p,
            r,
            chi,
            sum,
            format,
            out,
            force,
        } => {
            validate_d(d)?;
            if r == 0 {
                return Err(usage("r must be at least 1"));
            }
            if sum && chi.is_some() {
                return Err(usage("--sum applies only to the level-1 function (omit --chi)"));
            }
            if sum {
                guard(force, "(p-1)^d", (p.saturating_sub(1) as u128).pow(d as u32), 1_000_000)?;
            }
            let q = (p as u128)
                .checked_pow(r)
                .ok_or_else(|| usage("p^r overflows"))?;
            guard(force, "(p^r-1)^d", (q - 1).pow(d as u32), 1_000_000)?;
            let exps = chi
                .as_deref()
                .map(parse_chi_arg)
                .transpose()
                .map_err(usage)?;
            let f = build_test_function(p, r, d, exps.as_deref(), sum).map_err(usage)?;
            let doc = testfn_doc(&f);
            let text = match format {
                Format::Json => emit_testfn_json(&doc),
                Format::Csv => emit_testfn_csv(&doc),
                Format::Dot => return Err(usage("DOT output is only available for strata")),
            };
            write_output(out.as_deref(), &text)
        }
        Cmd::Verify { suite, d, p, r, force } => {
            validate_d(d)?;
            let seed = read_seed()?;
            let cfg = SuiteConfig { d, p, r, seed, force };
            let outcome = std::panic::catch_unwind(|| run_suite(&suite, &cfg));
            match outcome {
                Ok(Ok(lines)) => {
                    for line in lines {
                        println!("{line}");
                    }
                    Ok(())
                }
                Ok(Err(msg)) => {
                    if msg.starts_with("unknown suite") {
                        Err(usage(msg))
                    } else if msg.contains("--force") {
                        Err(usage(msg))
                    } else {
                        Err(Failure::Run(format!("verification failed: {msg}")))
                    }
                }
                Err(panic) => Err(Failure::Run(format!(
                    "verification failed: internal cross-check panicked: {}",
                    panic_text(&panic)
                ))),
            }
        }
        Cmd::Lfactor {
            d,
            p,
            chi,
            eta,
            r,
            order,
            out,
        } => {
            validate_d(d)?;
            if order == 0 {
                return Err(usage("order must be at least 1"));
            }
            let exps = match chi.as_deref() {
                Some(s) => parse_chi_arg(s).map_err(usage)?,
                None => vec![0i64; d],
            };
            if exps.len() != d {
                return Err(usage(format!(
                    "--chi has {} entries, expected d={d}",
                    exps.len()
                )));
            }
            let chi = DepthZeroChar::new(p, &exps).map_err(|e| usage(e.to_string()))?;
            let eta = parse_eta_arg(chi.scalar_modulus(), &eta).map_err(usage)?;
            if eta.len() != d {
                return Err(usage(format!(
                    "--eta has {} entries, expected d={d}",
                    eta.len()
                )));
            }
            let param =
                LanglandsParamData::new(chi, eta, p, r).map_err(|e| usage(e.to_string()))?;
            let f = lss_factor(&param, order).map_err(|e| Failure::Run(e.to_string()))?;
            let mut text = String::from("numerator: 1\n");
            text.push_str(&format!("denominator: {}\n", poly_in_u(&f.denominator)));
            text.push_str(&format!("series: {}\n", poly_in_u(&f.series)));
            write_output(out.as_deref(), &text)
        }
        Cmd::AlcoveSvg { d, blocks, nu, out } => {
            validate_d(d)?;
            if d != 3 {
                return Err(usage(format!("the alcove picture is rank 3 only, got d={d}")));
            }
            let levi = parse_levi(d, blocks.as_deref())?;
            let nu = parse_nu(&levi, nu)?;
            let pic = rank3_picture(&levi, &nu).map_err(usage)?;
            write_output(out.as_deref(), &render_svg(&pic))
        }
    }
}

fn validate_d(d: usize) -> Result<(), Failure> {
    if d == 0 {
        return Err(usage("d must be at least 1"));
    }
    Ok(())
}

fn guard(force: bool, what: &str, actual: u128, limit: u128) -> Result<(), Failure> {
    if actual > limit && !force {
        return Err(usage(format!(
            "{what} = {actual} exceeds the desk-scale limit {limit}; pass --force to run anyway"
        )));
    }
    Ok(())
}

fn parse_levi(d: usize, blocks: Option<&str>) -> Result<LeviDatum, Failure> {
    let blocks = match blocks {
        None => return Ok(LeviDatum::full(d)),
        Some(s) => s,
    };
    let mut parsed: Vec<Vec<usize>> = Vec::new();
    for block in blocks.split(';') {
        let mut b = Vec::new();
        for piece in block.split(',') {
            let piece = piece.trim();
            b.push(
                piece
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad block index {piece:?}")))?,
            );
        }
        parsed.push(b);
    }
    LeviDatum::new(d, parsed).map_err(|e| usage(e.to_string()))
}

fn parse_nu(levi: &LeviDatum, nu: Option<usize>) -> Result<Vec<i64>, Failure> {
    let j = nu.unwrap_or(1);
    if !(1..=levi.d).contains(&j) {
        return Err(usage(format!("--nu {j} is outside 1..={}", levi.d)));
    }
    // Normalize to the blockwise dominant representative of e_j's orbit.
    let bidx = levi.block_of(j).map_err(|e| usage(e.to_string()))?;
    Ok(levi.dominant_rep(bidx))
}

fn read_seed() -> Result<u64, Failure> {
    match std::env::var("ALCOVE_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("ALCOVE_SEED must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(0x5eed_0000_0000_0001),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let resolved = match std::env::var_os("ALCOVE_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| Failure::Run(format!("cannot create {parent:?}: {e}")))?;
                }
            }
            std::fs::write(&resolved, text)
                .map_err(|e| Failure::Run(format!("cannot write {resolved:?}: {e}")))
        }
    }
}

fn poly_in_u(coeffs: &[alcove_core::scalar::Scalar]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let wrapped = if cs.contains('+') || cs.contains('-') || cs.contains(' ') {
            format!("({cs})")
        } else {
            cs
        };
        parts.push(match k {
            0 => wrapped,
            1 => format!("{wrapped}*u"),
            _ => format!("{wrapped}*u^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn panic_text(panic: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = panic.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = panic.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".into()
    }
}
