//! Command-line front end: every library entry point behind one binary with
//! stable JSON output and reproducible seeds.
//!
//! Exit codes: 0 success/feasible, 2 usage error, 3 infeasible, 4 resource
//! limit exceeded.

use clap::{Parser, Subcommand};
use hornlab::matrix::{self, SampleKind};
use hornlab::smith::{self, FactoredChain, Poly, ValuationChain};
use hornlab::spectra::{self, SetKind, Spectrum};
use hornlab::{horn, lr, Error, ExecMode, Partition};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "hornlab", version, about = "Exact feasibility checks for eigenvalue, singular-value, and invariant-factor problems", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one Littlewood-Richardson coefficient
    Lr {
        /// First factor, comma-separated parts (e.g. 3,2,1)
        #[arg(long)]
        lam: String,
        /// Second factor
        #[arg(long)]
        mu: String,
        /// Target shape
        #[arg(long)]
        nu: String,
        /// Print every valid filling as rows of integers
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate an inequality-index set, one entry per line
    HornSet {
        /// U, T, S, or R
        #[arg(long)]
        kind: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: u32,
        /// Number of summands; omit for the classical three-matrix sets
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether three spectra are realizable
    CheckSpectra {
        /// Comma-separated rationals, weakly decreasing (e.g. 3,1/2,-1)
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        gamma: String,
        /// Inequality family: T (default) or R
        #[arg(long, default_value = "T")]
        set: String,
        /// hermitian (default), integral, singular-add, or singular-mul
        #[arg(long, default_value = "hermitian")]
        mode: String,
        /// Row count for singular-add (default: spectrum length)
        #[arg(long)]
        m: Option<usize>,
        /// Column count for singular-add (default: spectrum length)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Sharp bounds on one eigenvalue of a sum with the given spectra
    Interval {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Which eigenvalue (1-based); required unless --products
        #[arg(long)]
        k: Option<u32>,
        /// Determinant bounds over matchings instead of a single eigenvalue
        #[arg(long)]
        products: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sample random instances and report the worst inequality slack
    VerifyRandom {
        /// hermitian, real-symmetric, singular-add, or singular-prod
        #[arg(long)]
        mode: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce one of the built-in worked examples
    VerifyExample {
        /// 1, 3, or 4
        #[arg(long)]
        which: u32,
        #[arg(long)]
        json: bool,
    },
    /// Diagonalize a matrix with unimodular row and column operations
    Smith {
        /// Path to a JSON file holding an array of rows
        #[arg(long)]
        matrix: String,
        /// Report valuations of the invariant factors at this prime only
        #[arg(long, conflicts_with = "poly")]
        prime: Option<u64>,
        /// Entries are polynomials given as coefficient arrays, constant first
        #[arg(long)]
        poly: bool,
        #[arg(long)]
        json: bool,
    },
    /// Invariant factors of block-triangular matrices with prescribed blocks
    Carlson {
        /// Diagonal-block chain, e.g. "T:2" or "T:2,1;2:3"
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Check this specific chain instead of listing all feasible ones
        #[arg(long)]
        c: Option<String>,
        /// Drop chains with any exponent above this bound
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Candidate facet inequalities for sums of n x n singular-value triples
    Facets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_partition(text: &str) -> Result<Partition, Error> {
    if text.trim().is_empty() {
        return Partition::new(Vec::new());
    }
    let parts: Result<Vec<u32>, _> = text.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|e| Error::validation(format!("bad partition {text:?}: {e}")))?;
    Partition::new(parts)
}

fn parse_spectrum(text: &str) -> Result<Spectrum, Error> {
    let values: Result<Vec<BigRational>, Error> = text
        .split(',')
        .map(|t| {
            BigRational::from_str(t.trim())
                .map_err(|e| Error::validation(format!("bad rational {t:?}: {e}")))
        })
        .collect();
    Spectrum::new(values?)
}

/// Parses "T:2,1;2:3" into a factored chain.  The chain length is the longest
/// exponent list, unless `force_length` pads it further.
fn parse_chain(text: &str, force_length: Option<usize>) -> Result<FactoredChain, Error> {
    let mut primes: BTreeMap<String, ValuationChain> = BTreeMap::new();
    let mut length = force_length.unwrap_or(0);
    for block in text.split(';') {
        let block = block.trim();
        if block.is_empty() || block == "1" {
            continue;
        }
        let (label, exps) = block
            .split_once(':')
            .ok_or_else(|| Error::validation(format!("expected prime:exponents, got {block:?}")))?;
        let exps: Result<Vec<u32>, _> = exps.split(',').map(|t| t.trim().parse::<u32>()).collect();
        let exps = exps.map_err(|e| Error::validation(format!("bad exponents in {block:?}: {e}")))?;
        length = length.max(exps.len());
        if primes.insert(label.trim().to_string(), ValuationChain::new(exps)?).is_some() {
            return Err(Error::validation(format!("prime {label:?} given twice")));
        }
    }
    FactoredChain::new(length.max(1), primes)
}

fn format_chain(chain: &FactoredChain) -> String {
    let blocks: Vec<String> = chain
        .primes()
        .map(|(label, vals)| {
            let exps: Vec<String> = vals.exponents().iter().map(|e| e.to_string()).collect();
            format!("{label}:{}", exps.join(","))
        })
        .collect();
    if blocks.is_empty() {
        "1".to_string()
    } else {
        blocks.join(";")
    }
}

fn json_value(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn bigint_entry(value: &serde_json::Value) -> Result<BigInt, Error> {
    let bad = || Error::validation(format!("bad integer entry {value}"));
    if let Some(i) = value.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = value.as_str() {
        return BigInt::from_str(s.trim()).map_err(|_| bad());
    }
    Err(bad())
}

fn rational_entry(value: &serde_json::Value) -> Result<BigRational, Error> {
    let bad = || Error::validation(format!("bad rational entry {value}"));
    if let Some(i) = value.as_i64() {
        return Ok(BigRational::from_integer(BigInt::from(i)));
    }
    if let Some(s) = value.as_str() {
        return BigRational::from_str(s.trim()).map_err(|_| bad());
    }
    Err(bad())
}

fn read_matrix_file(path: &str) -> Result<Vec<Vec<serde_json::Value>>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::validation(format!("bad JSON in {path}: {e}")))?;
    let bad = || Error::validation("expected an array of equal-length rows".to_string());
    let rows = value.as_array().ok_or_else(bad)?;
    let mut out = Vec::new();
    for row in rows {
        out.push(row.as_array().ok_or_else(bad)?.clone());
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out[0].len()) {
        return Err(bad());
    }
    Ok(out)
}

fn parse_set_kind(text: &str) -> Result<SetKind, Error> {
    match text {
        "T" => Ok(SetKind::T),
        "R" => Ok(SetKind::R),
        other => Err(Error::validation(format!("unknown set {other:?}, expected T or R"))),
    }
}

fn triple_line(t: &horn::HornTriple, json: bool) -> String {
    if json {
        json_value(&serde_json::to_value(t).expect("serializable"))
    } else {
        format!("I={} J={} K={}", t.i, t.j, t.k)
    }
}

fn tuple_line(t: &horn::HornTuple, json: bool) -> String {
    if json {
        json_value(&serde_json::to_value(t).expect("serializable"))
    } else {
        let sets: Vec<String> = t.sets.iter().map(|s| s.to_string()).collect();
        sets.join(" ")
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, Error> {
    let mode = ExecMode::Parallel;
    match cli.command {
        Command::Lr { lam, mu, nu, witness, json } => {
            let lam = parse_partition(&lam)?;
            let mu = parse_partition(&mu)?;
            let nu = parse_partition(&nu)?;
            let coeff = lr::lr_coefficient(&lam, &mu, &nu);
            if json {
                let mut body = serde_json::json!({ "coefficient": coeff.to_string() });
                if witness {
                    let fillings = lr::lr_fillings(&lam, &mu, &nu);
                    body["fillings"] = serde_json::to_value(fillings).expect("serializable");
                }
                writeln!(out, "{}", json_value(&body)).ok();
            } else {
                writeln!(out, "{coeff}").ok();
                if witness {
                    for filling in lr::lr_fillings(&lam, &mu, &nu) {
                        writeln!(out).ok();
                        for row in filling {
                            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                            writeln!(out, "{}", cells.join(" ")).ok();
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::HornSet { kind, r, n, m, json } => {
            match (kind.as_str(), m) {
                ("U", None) => {
                    for t in horn::u_set(r, n, mode)? {
                        writeln!(out, "{}", triple_line(&t, json)).ok();
                    }
                }
                ("T", None) => {
                    for t in horn::t_set(r, n, mode)? {
                        writeln!(out, "{}", triple_line(&t, json)).ok();
                    }
                }
                ("S", None) => {
                    for t in horn::s_set(r, n, mode)? {
                        writeln!(out, "{}", triple_line(&t, json)).ok();
                    }
                }
                ("R", None) => {
                    for t in horn::r_set(r, n, mode)? {
                        writeln!(out, "{}", triple_line(&t, json)).ok();
                    }
                }
                ("U", Some(m)) => {
                    for t in horn::u_set_m(r, n, m, mode)? {
                        writeln!(out, "{}", tuple_line(&t, json)).ok();
                    }
                }
                ("T", Some(m)) => {
                    for t in horn::t_set_m(r, n, m, mode)? {
                        writeln!(out, "{}", tuple_line(&t, json)).ok();
                    }
                }
                ("S", Some(m)) => {
                    for t in horn::s_set_m(r, n, m, mode)? {
                        writeln!(out, "{}", tuple_line(&t, json)).ok();
                    }
                }
                ("R", Some(m)) => {
                    for t in horn::r_set_m(r, n, m, mode)? {
                        writeln!(out, "{}", tuple_line(&t, json)).ok();
                    }
                }
                (other, _) => {
                    return Err(Error::validation(format!(
                        "unknown kind {other:?}, expected U, T, S, or R"
                    )))
                }
            }
            Ok(EXIT_OK)
        }
        Command::CheckSpectra { alpha, beta, gamma, set, mode: check, m, n, json } => {
            let a = parse_spectrum(&alpha)?;
            let b = parse_spectrum(&beta)?;
            let c = parse_spectrum(&gamma)?;
            let kind = parse_set_kind(&set)?;
            let verdict = match check.as_str() {
                "hermitian" => spectra::check_hermitian_triple(&a, &b, &c, kind, mode)?,
                "integral" => spectra::check_integral_via_lr(&a, &b, &c, mode)?,
                "singular-add" => {
                    let rows = m.unwrap_or(a.len());
                    let cols = n.unwrap_or(a.len());
                    spectra::check_singular_additive(&a, &b, &c, rows, cols, kind, mode)?
                }
                "singular-mul" => spectra::check_singular_multiplicative(&a, &b, &c, kind, mode)?,
                other => {
                    return Err(Error::validation(format!(
                        "unknown mode {other:?}, expected hermitian, integral, singular-add, or singular-mul"
                    )))
                }
            };
            if json {
                writeln!(out, "{}", json_value(&verdict.to_json())).ok();
            } else if verdict.feasible {
                writeln!(out, "feasible").ok();
            } else {
                writeln!(out, "infeasible").ok();
            }
            Ok(if verdict.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::Interval { alpha, beta, k, products, json } => {
            let a = parse_spectrum(&alpha)?;
            let b = parse_spectrum(&beta)?;
            let (label, lo, hi) = if products {
                let (lo, hi) = spectra::fiedler_bounds(&a, &b)?;
                ("determinant".to_string(), lo, hi)
            } else {
                let k = k.ok_or_else(|| Error::validation("--k is required".to_string()))?;
                let (lo, hi) = spectra::gamma_k_interval(&a, &b, k)?;
                (format!("gamma_{k}"), lo, hi)
            };
            if json {
                let body = serde_json::json!({
                    "quantity": label,
                    "lower": lo.to_string(),
                    "upper": hi.to_string(),
                });
                writeln!(out, "{}", json_value(&body)).ok();
            } else {
                writeln!(out, "{label} in [{lo}, {hi}]").ok();
            }
            Ok(EXIT_OK)
        }
        Command::VerifyRandom { mode: sample_mode, n, trials, seed, json } => {
            let kind = match sample_mode.as_str() {
                "hermitian" => SampleKind::HermitianSum,
                "real-symmetric" => SampleKind::RealSymmetricSum,
                "singular-add" => SampleKind::SingularSum,
                "singular-prod" => SampleKind::SingularProduct,
                other => {
                    return Err(Error::validation(format!(
                        "unknown mode {other:?}, expected hermitian, real-symmetric, singular-add, or singular-prod"
                    )))
                }
            };
            let worst = matrix::random_battery(n, trials, seed, kind, mode)?;
            let ok = worst >= -matrix::SLACK_TOL;
            if json {
                let body = serde_json::json!({
                    "mode": sample_mode,
                    "n": n,
                    "trials": trials,
                    "seed": seed,
                    "min_slack": worst,
                    "passed": ok,
                });
                writeln!(out, "{}", json_value(&body)).ok();
            } else {
                writeln!(out, "{trials} trials, worst slack {worst:.3e}: {}", if ok { "ok" } else { "VIOLATED" }).ok();
            }
            Ok(if ok { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::VerifyExample { which, json } => {
            let report = match which {
                1 => matrix::verify_example1(1.0, 0.0, -1.0)?,
                3 => matrix::verify_example3()?,
                4 => matrix::verify_example4()?,
                other => {
                    return Err(Error::validation(format!(
                        "no example {other}; choose 1, 3, or 4"
                    )))
                }
            };
            if json {
                writeln!(out, "{}", json_value(&serde_json::to_value(&report).expect("serializable"))).ok();
            } else {
                for check in &report.checks {
                    writeln!(
                        out,
                        "{}: residual {:.3e} (tol {:.0e}) {}",
                        check.name,
                        check.residual,
                        check.tolerance,
                        if check.passed { "ok" } else { "FAILED" }
                    )
                    .ok();
                }
                writeln!(out, "{}", if report.passed { "passed" } else { "failed" }).ok();
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::Smith { matrix: path, prime, poly, json } => {
            let raw = read_matrix_file(&path)?;
            if poly {
                let m: Vec<Vec<Poly>> = raw
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|entry| {
                                let bad = || {
                                    Error::validation(format!(
                                        "bad polynomial entry {entry}: expected coefficient array"
                                    ))
                                };
                                let coeffs = entry.as_array().ok_or_else(bad)?;
                                let coeffs: Result<Vec<BigRational>, Error> =
                                    coeffs.iter().map(rational_entry).collect();
                                Ok(Poly::from_coeffs(coeffs?))
                            })
                            .collect::<Result<Vec<Poly>, Error>>()
                    })
                    .collect::<Result<_, _>>()?;
                let form = smith::smith_form(&m)?;
                let diag: Vec<String> = form.diagonal.iter().map(|p| p.to_string()).collect();
                if json {
                    let body = serde_json::json!({ "diagonal": diag });
                    writeln!(out, "{}", json_value(&body)).ok();
                } else {
                    writeln!(out, "{}", diag.join("; ")).ok();
                }
                return Ok(EXIT_OK);
            }
            let m: Vec<Vec<BigInt>> = raw
                .iter()
                .map(|row| row.iter().map(bigint_entry).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            if let Some(p) = prime {
                let chain = smith::invariant_factors_at(&m, p)?;
                let body = serde_json::json!({
                    "prime": p.to_string(),
                    "exponents": chain.exponents(),
                });
                if json {
                    writeln!(out, "{}", json_value(&body)).ok();
                } else {
                    let exps: Vec<String> =
                        chain.exponents().iter().map(|e| e.to_string()).collect();
                    writeln!(out, "{p}: {}", exps.join(",")).ok();
                }
                return Ok(EXIT_OK);
            }
            let form = smith::smith_form(&m)?;
            let to_strings = |m: &Vec<Vec<BigInt>>| -> Vec<Vec<String>> {
                m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
            };
            let diag: Vec<String> = form.diagonal.iter().map(|x| x.to_string()).collect();
            if json {
                let body = serde_json::json!({
                    "diagonal": diag,
                    "p": to_strings(&form.p),
                    "q": to_strings(&form.q),
                });
                writeln!(out, "{}", json_value(&body)).ok();
            } else {
                writeln!(out, "{}", diag.join(" ")).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Carlson { a, b, c, max_degree, json } => {
            let a = parse_chain(&a, None)?;
            let b = parse_chain(&b, None)?;
            let total = a.length() + b.length();
            if let Some(c) = c {
                let c = parse_chain(&c, Some(total))?;
                let feasible = smith::carlson_feasible(&a, &b, &c, mode)?;
                if json {
                    writeln!(out, "{}", json_value(&serde_json::json!({ "feasible": feasible }))).ok();
                } else {
                    writeln!(out, "{}", if feasible { "feasible" } else { "infeasible" }).ok();
                }
                return Ok(if feasible { EXIT_OK } else { EXIT_INFEASIBLE });
            }
            let cap = max_degree.unwrap_or(u32::MAX);
            for chain in smith::carlson_chains(&a, &b, mode)? {
                let within = chain
                    .primes()
                    .all(|(_, vals)| vals.exponents().iter().all(|&e| e <= cap));
                if !within {
                    continue;
                }
                if json {
                    let body = serde_json::json!({
                        "length": chain.length(),
                        "primes": chain.to_json(),
                    });
                    writeln!(out, "{}", json_value(&body)).ok();
                } else {
                    writeln!(out, "{}", format_chain(&chain)).ok();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Facets { n, json } => {
            for (triple, ineq) in spectra::buch_facet_candidates(n, mode)? {
                if json {
                    let body = serde_json::json!({
                        "triple": serde_json::to_value(&triple).expect("serializable"),
                        "inequality": ineq.to_string(),
                    });
                    writeln!(out, "{}", json_value(&body)).ok();
                } else {
                    writeln!(out, "{}: {}", triple_line(&triple, false), ineq).ok();
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("HORNLAB_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => hornlab::init_threads(Some(cap)),
            _ => {
                eprintln!("HORNLAB_THREADS must be a positive integer, got {raw:?}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Resource(_) => ExitCode::from(EXIT_RESOURCE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
