//! Command-line front end.
//!
//! Exit codes: `0` every check passed, `1` a dimension mismatch (the first
//! mismatching degree is printed), `2` the invocation was invalid.

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bijection::{check_bijection, monomial_listing, BijectionError};
use crate::blocks::SpectrumExpr;
use crate::bsone::{lint_theta_coefficients, mult_gap_table, splitting_table, suspension_matches_t};
use crate::grading::{GradingError, Prime, RODegree};
use crate::lenses::{eval, EvalError, Lens};
use crate::reference::{hz_modp_generators, milnor_b_generators, milnor_series, milnor_series_p2_classical};
use crate::series::{from_generators, Count, GeneratorSpec, GradedDimSeries, SeriesError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable supplying `--max-degree` when the flag is absent.
pub const MAX_DEGREE_ENV: &str = "CPSTEENROD_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(name = "cpsteenrod", version, about = "Dimension checks for the C_p-equivariant dual Steenrod algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LensArg {
    Underlying,
    Phi,
    Both,
}

impl LensArg {
    fn lenses(self) -> Vec<Lens> {
        match self {
            LensArg::Underlying => vec![Lens::Underlying],
            LensArg::Phi => vec![Lens::Phi],
            LensArg::Both => Lens::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the model's dimensions with the target through a top degree.
    CheckMain {
        #[arg(long)]
        prime: Prime,
        #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 100)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = LensArg::Both)]
        lens: LensArg,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Shift one reference generator, e.g. `xi1:+1` or `b:-1`.
        #[arg(long)]
        perturb: Option<Perturbation>,
        /// Evaluate the two lenses on separate threads when greater than 1.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare Λ(τ_0) ⊗ (model) with the dual Steenrod algebra.
    CheckCorollary {
        #[arg(long)]
        prime: Prime,
        #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 100)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Verify the V/W monomial bijection.
    Bijection {
        #[arg(long)]
        prime: Prime,
        #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 100)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Write a JSON listing of index/monomial pairs to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        dump_limit: usize,
    },
    /// Lewis splitting degrees and the multiplication/suspension checks.
    Bsone {
        #[arg(long)]
        prime: Prime,
        #[arg(long, default_value_t = 10)]
        k_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Compare forced and printed u_λ exponents. Always exits 0.
    Lint {
        #[arg(long)]
        prime: Prime,
        #[arg(long, default_value_t = 3)]
        i_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Evaluate an expression file (JSON tree) under one lens.
    Series {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        lens: Lens,
        #[arg(long, env = MAX_DEGREE_ENV, default_value_t = 100)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error("no reference generator named {0:?}")]
    UnknownGenerator(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A shift of one named generator's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub generator: String,
    pub delta: i64,
}

impl FromStr for Perturbation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, delta) = s.split_once(':').ok_or_else(|| format!("expected NAME:DELTA, got {s:?}"))?;
        let delta: i64 = delta.trim_start_matches('+').parse().map_err(|_| format!("bad delta in {s:?}"))?;
        if name.is_empty() || delta == 0 {
            return Err(format!("perturbation {s:?} changes nothing"));
        }
        Ok(Perturbation { generator: name.to_string(), delta })
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:+}", self.generator, self.delta)
    }
}

impl Perturbation {
    pub fn apply(&self, gens: &mut [GeneratorSpec]) -> Result<(), CliError> {
        let g = gens
            .iter_mut()
            .find(|g| g.name == self.generator)
            .ok_or_else(|| CliError::UnknownGenerator(self.generator.clone()))?;
        g.degree += self.delta;
        Ok(())
    }
}

/// One degreewise comparison, in the shape every command emits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonDoc {
    pub check: String,
    pub prime: Prime,
    pub max_degree: i64,
    pub lens: Lens,
    pub lower_bound: i64,
    /// Counts for degrees `lower_bound..=max_degree`.
    pub lhs: Vec<Count>,
    pub rhs: Vec<Count>,
    pub equal: bool,
    pub first_mismatch: Option<i64>,
}

impl ComparisonDoc {
    pub fn new(check: &str, prime: Prime, n: i64, lens: Lens, lhs: &GradedDimSeries, rhs: &GradedDimSeries) -> Self {
        let lower_bound = lhs.lower_bound().min(rhs.lower_bound()).min(0);
        let first_mismatch = lhs.first_mismatch(rhs);
        ComparisonDoc {
            check: check.to_string(),
            prime,
            max_degree: n,
            lens,
            lower_bound,
            lhs: lhs.to_dense(lower_bound, n),
            rhs: rhs.to_dense(lower_bound, n),
            equal: first_mismatch.is_none(),
            first_mismatch,
        }
    }
}

/// Reference series for one lens of the main comparison: `H_*(Z;F_p)`-type
/// for the underlying lens, `A_* ⊗ F_p[b]` for the phi lens.
pub fn main_target(p: Prime, lens: Lens, n: i64, perturb: Option<&Perturbation>) -> Result<GradedDimSeries, CliError> {
    let mut gens = match lens {
        Lens::Underlying => hz_modp_generators(p, n),
        Lens::Phi => milnor_b_generators(p, n),
    };
    if let Some(pert) = perturb {
        pert.apply(&mut gens)?;
    }
    Ok(from_generators(&gens, n)?)
}

/// Model versus target for one lens.
pub fn check_main(p: Prime, lens: Lens, n: i64, perturb: Option<&Perturbation>) -> Result<ComparisonDoc, CliError> {
    let lhs = eval(&SpectrumExpr::DsaModel { p }, lens, n)?;
    let rhs = main_target(p, lens, n, perturb)?;
    Ok(ComparisonDoc::new("main", p, n, lens, &lhs, &rhs))
}

/// `Λ(τ_0) ⊗ X` underlying versus `A_*`; at `p = 2` also the odd-form
/// `A_*` versus the classical mod 2 presentation.
pub fn check_corollary(p: Prime, n: i64) -> Result<Vec<ComparisonDoc>, CliError> {
    let expr = SpectrumExpr::tensor(vec![
        SpectrumExpr::sum(vec![SpectrumExpr::Unit, SpectrumExpr::sphere(RODegree::trivial(1))]),
        SpectrumExpr::DsaModel { p },
    ]);
    let lhs = eval(&expr, Lens::Underlying, n)?;
    let milnor = milnor_series(p, n);
    let mut docs = vec![ComparisonDoc::new("corollary", p, n, Lens::Underlying, &lhs, &milnor)];
    if p.get() == 2 {
        let classical = milnor_series_p2_classical(n)?;
        docs.push(ComparisonDoc::new("p2-classical", p, n, Lens::Underlying, &milnor, &classical));
    }
    Ok(docs)
}

fn write_comparisons(out: &mut dyn Write, docs: &[ComparisonDoc], format: Format) -> Result<(), CliError> {
    for (k, doc) in docs.iter().enumerate() {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(doc)?)?,
            Format::Csv => {
                if k > 0 {
                    writeln!(out)?;
                }
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["degree", "lhs", "rhs"])?;
                for (j, (l, r)) in doc.lhs.iter().zip(&doc.rhs).enumerate() {
                    let d = doc.lower_bound + j as i64;
                    w.write_record([d.to_string(), l.to_string(), r.to_string()])?;
                }
                w.flush()?;
            }
            Format::Plain => {
                writeln!(out, "{} p={} N={} lens={}", doc.check, doc.prime, doc.max_degree, doc.lens)?;
                writeln!(out, "{:>6} {:>20} {:>20}", "degree", "lhs", "rhs")?;
                for (j, (l, r)) in doc.lhs.iter().zip(&doc.rhs).enumerate() {
                    let d = doc.lower_bound + j as i64;
                    let mark = if l != r { "  <-" } else { "" };
                    writeln!(out, "{d:>6} {l:>20} {r:>20}{mark}")?;
                }
                match doc.first_mismatch {
                    None => writeln!(out, "verdict: EQUAL")?,
                    Some(d) => writeln!(out, "verdict: MISMATCH at degree {d}")?,
                }
            }
        }
    }
    Ok(())
}

fn comparison_exit(docs: &[ComparisonDoc]) -> i32 {
    if docs.iter().all(|d| d.equal) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn require_nonnegative(n: i64) -> Result<(), CliError> {
    if n < 0 {
        Err(CliError::Usage(format!("--max-degree must be nonnegative, got {n}")))
    } else {
        Ok(())
    }
}

/// Runs a parsed command, writing its report to `out`, and returns the exit
/// code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::CheckMain { prime, max_degree, lens, format, perturb, jobs } => {
            require_nonnegative(max_degree)?;
            let lenses = lens.lenses();
            let docs: Vec<ComparisonDoc> = if jobs > 1 && lenses.len() > 1 {
                let perturb = perturb.as_ref();
                std::thread::scope(|s| {
                    let handles: Vec<_> = lenses
                        .iter()
                        .map(|&l| s.spawn(move || check_main(prime, l, max_degree, perturb)))
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("lens evaluation panicked")).collect::<Result<Vec<_>, _>>()
                })?
            } else {
                lenses
                    .iter()
                    .map(|&l| check_main(prime, l, max_degree, perturb.as_ref()))
                    .collect::<Result<_, _>>()?
            };
            write_comparisons(out, &docs, format)?;
            Ok(comparison_exit(&docs))
        }
        Command::CheckCorollary { prime, max_degree, format } => {
            require_nonnegative(max_degree)?;
            let docs = check_corollary(prime, max_degree)?;
            write_comparisons(out, &docs, format)?;
            Ok(comparison_exit(&docs))
        }
        Command::Bijection { prime, max_degree, format, dump, dump_limit } => {
            require_nonnegative(max_degree)?;
            let report = check_bijection(prime, max_degree)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["check", "pass", "first_mismatch_degree"])?;
                    for c in &report.checks {
                        let d = c.first_mismatch_degree.map(|d| d.to_string()).unwrap_or_default();
                        w.write_record([c.name.as_str(), if c.pass { "true" } else { "false" }, &d])?;
                    }
                    w.flush()?;
                }
                Format::Plain => {
                    writeln!(out, "bijection p={} N={} indices={}", prime, max_degree, report.indices)?;
                    for (k, c) in report.checks.iter().enumerate() {
                        let status = if c.pass { "PASS" } else { "FAIL" };
                        write!(out, "({}) {status} {}", k + 1, c.name)?;
                        if let Some(detail) = &c.detail {
                            write!(out, ": {detail}")?;
                        }
                        writeln!(out)?;
                    }
                }
            }
            if let Some(path) = dump {
                let listing = monomial_listing(prime, max_degree, dump_limit)?;
                std::fs::write(path, serde_json::to_string_pretty(&listing)?)?;
            }
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Bsone { prime, k_max, format } => {
            let table = splitting_table(prime, k_max);
            let i_top = (1u32..).take_while(|&i| prime.pow(i).is_ok_and(|q| q as u64 <= k_max.max(1))).last().unwrap_or(1);
            let gaps = mult_gap_table(prime, i_top)?;
            let susp = suspension_matches_t(prime, i_top)?;
            let ok = gaps.iter().all(|g| g.pass) && susp.iter().all(|s| s.2);
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        k: u64,
                        fixed: i64,
                        underlying: i64,
                    }
                    let rows: Vec<Row> = table
                        .iter()
                        .map(|&(k, d)| Row { k, fixed: d.fixed, underlying: d.underlying })
                        .collect();
                    let doc = serde_json::json!({
                        "prime": prime,
                        "k_max": k_max,
                        "splitting": rows,
                        "mult_gap": gaps,
                        "suspension_matches_t": susp.iter().map(|s| serde_json::json!({"i": s.0, "degree": s.1, "pass": s.2})).collect::<Vec<_>>(),
                    });
                    writeln!(out, "{doc}")?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["k", "fixed", "underlying"])?;
                    for (k, d) in &table {
                        w.write_record([k.to_string(), d.fixed.to_string(), d.underlying.to_string()])?;
                    }
                    w.flush()?;
                }
                Format::Plain => {
                    writeln!(out, "{:>6} {:>8} {:>10}", "k", "fixed", "underlying")?;
                    for (k, d) in &table {
                        writeln!(out, "{k:>6} {:>8} {:>10}", d.fixed, d.underlying)?;
                    }
                    for g in &gaps {
                        writeln!(
                            out,
                            "mult_gap i={}: {} (expected {}) {}",
                            g.i,
                            g.gap,
                            g.expected,
                            if g.pass { "PASS" } else { "FAIL" }
                        )?;
                    }
                    for (i, d, pass) in &susp {
                        writeln!(out, "suspension i={i}: {d} = |t_{i}| {}", if *pass { "PASS" } else { "FAIL" })?;
                    }
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Lint { prime, i_max, format } => {
            let rows = lint_theta_coefficients(prime, i_max)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::json!({"prime": prime, "rows": rows}))?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["i", "required", "forced", "printed", "exponent", "restriction"])?;
                    for r in &rows {
                        w.write_record([
                            r.i.to_string(),
                            r.required.to_string(),
                            r.forced_exponent.to_string(),
                            r.printed_exponent.to_string(),
                            (if r.exponent_matches { "MATCH" } else { "MISMATCH" }).to_string(),
                            (if r.restriction_pass { "PASS" } else { "FAIL" }).to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
                Format::Plain => {
                    writeln!(out, "{:>3} {:>12} {:>7} {:>7} {:>9} {:>12}", "i", "required", "forced", "printed", "exponent", "restriction")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>3} {:>12} {:>7} {:>7} {:>9} {:>12}",
                            r.i,
                            r.required.to_string(),
                            r.forced_exponent,
                            r.printed_exponent,
                            if r.exponent_matches { "MATCH" } else { "MISMATCH" },
                            if r.restriction_pass { "PASS" } else { "FAIL" },
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Series { expr, lens, max_degree, format } => {
            let text = std::fs::read_to_string(&expr)?;
            let e: SpectrumExpr = serde_json::from_str(&text)?;
            let s = eval(&e, lens, max_degree)?;
            let lower = s.lower_bound().min(0);
            let counts = s.to_dense(lower, max_degree);
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({"lens": lens, "max_degree": max_degree, "lower_bound": lower, "counts": counts})
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["degree", "count"])?;
                    for (j, c) in counts.iter().enumerate() {
                        w.write_record([(lower + j as i64).to_string(), c.to_string()])?;
                    }
                    w.flush()?;
                }
                Format::Plain => {
                    for (j, c) in counts.iter().enumerate() {
                        writeln!(out, "{:>6} {c}", lower + j as i64)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments and runs, mapping every error to an exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["cpsteenrod"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn perturbation_parsing() {
        assert_eq!("xi1:+1".parse::<Perturbation>().unwrap(), Perturbation { generator: "xi1".into(), delta: 1 });
        assert_eq!("b:-1".parse::<Perturbation>().unwrap().delta, -1);
        assert!("b:0".parse::<Perturbation>().is_err());
        assert!("b".parse::<Perturbation>().is_err());
    }

    #[test]
    fn not_prime_is_usage_error() {
        let (code, _, err) = run_args(&["check-main", "--prime", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("not prime"), "{err}");
    }

    #[test]
    fn json_document_shape() {
        let (code, out, _) = run_args(&["check-main", "--prime", "3", "--lens", "phi", "--format", "json", "--max-degree", "20"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["prime"], 3);
        assert_eq!(v["lens"], "phi");
        assert_eq!(v["equal"], true);
        assert!(v["first_mismatch"].is_null());
        assert_eq!(v["lhs"].as_array().unwrap().len(), 21);
    }

    #[test]
    fn perturbed_target_mismatches() {
        let (code, out, _) = run_args(&[
            "check-main", "--prime", "3", "--lens", "underlying", "--max-degree", "30", "--perturb", "xi1:+1",
        ]);
        assert_eq!(code, EXIT_MISMATCH);
        assert!(out.contains("MISMATCH at degree 4"), "{out}");
        let (code, _, err) = run_args(&["check-main", "--prime", "3", "--perturb", "zeta:+1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("zeta"));
    }

    #[test]
    fn lint_always_exits_zero() {
        let (code, out, _) = run_args(&["lint", "--prime", "3", "--i-max", "2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.matches("MISMATCH").count(), 2);
    }

    #[test]
    fn negative_degree_is_usage_error() {
        let (code, _, _) = run_args(&["check-corollary", "--prime", "3", "--max-degree=-1"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
