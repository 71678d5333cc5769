//! Command-line front end: `verify` runs identity suites and writes a report,
//! `emit` dumps a single operator matrix.
//!
//! Exit status: 0 when every check passed, 1 when any check failed, 2 on a
//! usage or configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::identities::{run_suite, CheckResult, IdentityError, Suite, SuiteReport, Target};
use crate::lattice::{
    make_a, make_a_dagger, make_u, make_v, matrix_unit_schwinger, matrix_unit_shift, position_x,
    proj_p, proj_r, proj_script_p, proj_script_r, LatticeConfig, LatticeError, Mode, Mutation,
    DEFAULT_TOLERANCE,
};
use crate::matrix::{OperatorMatrix, Scalar};
use crate::tensor::{coproduct_a_dagger, coproduct_u, flatten_permutation, ProductLatticeConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Product lattices checked when the tensor suite runs without `--tensor`.
pub const DEFAULT_TENSOR_PAIRS: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 2), (4, 3), (3, 5)];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "qudit-algebra",
    version,
    about = "Verify clock-and-shift and truncated shift operator identities on finite lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run identity suites and write a report.
    Verify(VerifyArgs),
    /// Print one operator matrix.
    Emit(EmitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutationArg {
    /// Clock diagonal uses q^(2n) instead of q^n.
    ClockRootSquared,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Mutation {
        match m {
            MutationArg::ClockRootSquared => Mutation::ClockRootSquared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    Shift,
    Schwinger,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Lattice size, or an inclusive range such as `2..8`.
    #[arg(long = "d", default_value = "2..8")]
    pub d: String,
    /// `all` or a comma-separated list of suite names.
    #[arg(long, default_value = "all")]
    pub suites: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Residual tolerance in float mode.
    #[arg(long = "tol", default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Grid spacing of the position operator: integer, decimal or fraction.
    #[arg(long, default_value = "1")]
    pub beta: String,
    /// Product lattices `d1xd2`, comma-separated, for the tensor suite.
    #[arg(long)]
    pub tensor: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Seed for sampled index quadruples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Zero all timing fields so repeated runs are byte-identical.
    #[arg(long)]
    pub deterministic: bool,
    /// Corrupt one constructor to confirm the verifier can fail.
    #[arg(long = "mutate", value_enum)]
    pub mutation: Option<MutationArg>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    /// Lattice size (not needed for the product-lattice operators).
    #[arg(long = "d")]
    pub d: Option<usize>,
    /// a, a_dagger, U, V, X, P:n, R:n, sP:n, sR:n, e:m,n,
    /// delta_a_dagger:d1,d2, delta_U:d1,d2 or flatten:d1,d2.
    #[arg(long)]
    pub op: String,
    /// Representation used for `e:m,n`.
    #[arg(long, value_enum, default_value_t = Rep::Shift)]
    pub rep: Rep,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value = "1")]
    pub beta: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_PASS
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(&args, stdout),
        Command::Emit(args) => cmd_emit(&args, stdout).map(|()| EXIT_PASS),
    };
    match outcome {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

// ---------------------------------------------------------------------------
// argument parsing

/// `"5"` or the inclusive range `"2..8"`.
pub fn parse_d_range(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --d value `{text}`: expected an integer or a range like 2..8"
        ))
    };
    let values: Vec<usize> = match text.split_once("..") {
        Some((lo, hi)) => {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(CliError::Usage(format!("empty --d range `{text}`")));
            }
            (lo..=hi).collect()
        }
        None => vec![text.trim().parse().map_err(|_| bad())?],
    };
    for &d in &values {
        if d < 2 {
            return Err(LatticeError::InvalidSize(d).into());
        }
    }
    Ok(values)
}

/// `"4x3,3x5"`.
pub fn parse_tensor_pairs(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .map(|pair| {
            let bad =
                || CliError::Usage(format!("invalid product lattice `{pair}`: expected d1xd2"));
            let (a, b) = pair.trim().split_once(['x', 'X']).ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// `"all"` or a comma-separated list of suite names, deduplicated and in
/// catalogue order.
pub fn parse_suites(text: &str) -> Result<Vec<Suite>, CliError> {
    if text.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites = text
        .split(',')
        .map(|s| Suite::from_name(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    suites.sort();
    suites.dedup();
    Ok(suites)
}

/// Positive rationals written as `3`, `0.25`, `-1.5` or `3/2`.
pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Usage(format!("invalid rational number `{text}`"));
    let text = text.trim();
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        let value = BigRational::new(numer, denom);
        Ok(if negative { -value } else { value })
    } else if let Some((numer, denom)) = text.split_once('/') {
        let numer = BigInt::from_str(numer.trim()).map_err(|_| bad())?;
        let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(numer, denom))
    } else {
        Ok(BigRational::from_integer(
            BigInt::from_str(text).map_err(|_| bad())?,
        ))
    }
}

// ---------------------------------------------------------------------------
// verify

/// A fully validated `verify` invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub ds: Vec<usize>,
    pub suites: Vec<Suite>,
    pub mode: Mode,
    pub tolerance: f64,
    pub beta: BigRational,
    pub tensor_pairs: Vec<(usize, usize)>,
    pub seed: u64,
    pub deterministic: bool,
    pub mutation: Option<Mutation>,
}

impl RunSpec {
    pub fn from_args(args: &VerifyArgs) -> Result<Self, CliError> {
        let mode: Mode = args.mode.into();
        let ds = parse_d_range(&args.d)?;
        let mut suites = parse_suites(&args.suites)?;
        let tensor_pairs = match &args.tensor {
            Some(text) => {
                if !suites.contains(&Suite::Tensor) {
                    suites.push(Suite::Tensor);
                }
                parse_tensor_pairs(text)?
            }
            None => DEFAULT_TENSOR_PAIRS.to_vec(),
        };
        if mode == Mode::Float && !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
            return Err(LatticeError::InvalidTolerance(args.tolerance.to_string()).into());
        }
        let spec = RunSpec {
            ds,
            suites,
            mode,
            tolerance: args.tolerance,
            beta: parse_rational(&args.beta)?,
            tensor_pairs,
            seed: args.seed,
            deterministic: args.deterministic,
            mutation: args.mutation.map(Into::into),
        };
        // surface configuration errors before any suite runs
        for &d in &spec.ds {
            spec.lattice_config(d)?;
        }
        if spec.suites.contains(&Suite::Tensor) {
            for &(d1, d2) in &spec.tensor_pairs {
                spec.product_config(d1, d2)?;
            }
        }
        Ok(spec)
    }

    fn lattice_config(&self, d: usize) -> Result<LatticeConfig, LatticeError> {
        Ok(LatticeConfig::new(d, self.mode)?
            .with_tolerance(self.tolerance)?
            .with_beta(self.beta.clone())?
            .with_seed(self.seed)
            .with_mutation(self.mutation))
    }

    fn product_config(&self, d1: usize, d2: usize) -> Result<ProductLatticeConfig, LatticeError> {
        ProductLatticeConfig::new(d1, d2, self.mode)?.with_tolerance(self.tolerance)
    }
}

/// One report run: every requested suite on one lattice.
#[derive(Debug, Clone)]
pub struct Run {
    pub d: usize,
    pub factors: Option<(usize, usize)>,
    pub mode: Mode,
    pub tolerance: f64,
    pub suites: Vec<SuiteReport>,
}

impl Run {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::all_passed)
    }
}

/// Runs every lattice suite for each `d`, then the tensor suite for each
/// product lattice. Runs come back in that order regardless of scheduling.
pub fn execute(spec: &RunSpec) -> Result<Vec<Run>, CliError> {
    let lattice_suites: Vec<Suite> = spec
        .suites
        .iter()
        .copied()
        .filter(|s| !s.is_product())
        .collect();
    let mut targets = Vec::new();
    if !lattice_suites.is_empty() {
        for &d in &spec.ds {
            targets.push((
                Target::Lattice(spec.lattice_config(d)?),
                lattice_suites.clone(),
            ));
        }
    }
    if spec.suites.contains(&Suite::Tensor) {
        for &(d1, d2) in &spec.tensor_pairs {
            targets.push((
                Target::Product(spec.product_config(d1, d2)?),
                vec![Suite::Tensor],
            ));
        }
    }
    targets
        .par_iter()
        .map(|(target, suites)| {
            let reports = suites
                .iter()
                .map(|&s| run_suite(s, target))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Run {
                d: target.d(),
                factors: target.factors(),
                mode: target.mode(),
                tolerance: target.tolerance(),
                suites: reports,
            })
        })
        .collect()
}

pub fn format_residual(residual: f64) -> String {
    if residual == 0.0 {
        "0".to_string()
    } else {
        format!("{residual:e}")
    }
}

fn check_json(r: &CheckResult, deterministic: bool) -> Value {
    let indices = match &r.indices {
        Some(ixs) => Value::Object(ixs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
        None => Value::Null,
    };
    let elapsed_us = if deterministic {
        0
    } else {
        r.elapsed.as_micros() as u64
    };
    json!({
        "name": r.name,
        "paper_ref": r.reference,
        "indices": indices,
        "instances": r.instances,
        "pass": r.pass,
        "max_residual": format_residual(r.max_residual),
        "elapsed_us": elapsed_us,
    })
}

pub fn report_json(runs: &[Run], deterministic: bool) -> Value {
    let runs: Vec<Value> = runs
        .iter()
        .map(|run| {
            let mut obj = Map::new();
            obj.insert("d".into(), json!(run.d));
            if let Some((d1, d2)) = run.factors {
                obj.insert("d1".into(), json!(d1));
                obj.insert("d2".into(), json!(d2));
            }
            obj.insert("mode".into(), json!(run.mode.as_str()));
            let tolerance = match run.mode {
                Mode::Exact => Value::Null,
                Mode::Float => json!(run.tolerance),
            };
            obj.insert("tolerance".into(), tolerance);
            let suites: Vec<Value> = run
                .suites
                .iter()
                .map(|s| {
                    json!({
                        "name": s.suite.name(),
                        "passed": s.passed,
                        "failed": s.failed,
                        "checks": s.results.iter().map(|r| check_json(r, deterministic)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            obj.insert("suites".into(), Value::Array(suites));
            Value::Object(obj)
        })
        .collect();
    json!({
        "artifact": "qudit-algebra",
        "version": env!("CARGO_PKG_VERSION"),
        "runs": runs,
    })
}

pub fn report_text(runs: &[Run]) -> String {
    let mut out = String::new();
    let (mut total, mut failed) = (0, 0);
    for run in runs {
        let lattice = match run.factors {
            Some((d1, d2)) => format!("d={} ({d1}x{d2})", run.d),
            None => format!("d={}", run.d),
        };
        for suite in &run.suites {
            for r in &suite.results {
                total += 1;
                if !r.pass {
                    failed += 1;
                }
                let _ = write!(
                    out,
                    "{} {} {lattice} mode={} residual={}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    run.mode.as_str(),
                    format_residual(r.max_residual),
                );
                if let Some(ixs) = &r.indices {
                    let shown: Vec<String> = ixs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let _ = write!(out, " at {}", shown.join(","));
                }
                out.push('\n');
            }
        }
    }
    let _ = writeln!(
        out,
        "{total} checks, {} passed, {failed} failed",
        total - failed
    );
    out
}

fn write_output(
    path: &Option<PathBuf>,
    body: &str,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = RunSpec::from_args(args)?;
    let runs = execute(&spec)?;
    let body = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(&runs, spec.deterministic))
                .expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report_text(&runs),
    };
    write_output(&args.output, &body, stdout)?;
    Ok(if runs.iter().all(Run::all_passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

// ---------------------------------------------------------------------------
// emit

fn parse_indices<const N: usize>(op: &str, text: &str) -> Result<[i64; N], CliError> {
    let bad = || {
        CliError::Usage(format!(
            "operator `{op}` expects {N} comma-separated integer index(es)"
        ))
    };
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| bad())
}

fn non_negative(op: &str, value: i64) -> Result<usize, CliError> {
    usize::try_from(value)
        .map_err(|_| CliError::Usage(format!("operator `{op}` needs non-negative indices")))
}

/// Builds the operator named by `op` (e.g. `P:1`, `e:0,1`, `delta_U:4,3`).
pub fn build_operator(args: &EmitArgs) -> Result<(usize, OperatorMatrix), CliError> {
    let mode: Mode = args.mode.into();
    let (name, params) = match args.op.split_once(':') {
        Some((name, params)) => (name, Some(params)),
        None => (args.op.as_str(), None),
    };
    let op = args.op.as_str();
    let product = |params: Option<&str>| -> Result<ProductLatticeConfig, CliError> {
        let [d1, d2] = parse_indices::<2>(op, params.unwrap_or(""))?;
        Ok(ProductLatticeConfig::new(
            non_negative(op, d1)?,
            non_negative(op, d2)?,
            mode,
        )?)
    };
    match name {
        "delta_a_dagger" => {
            let p = product(params)?;
            return Ok((p.dim(), coproduct_a_dagger(&p).map_err(LatticeError::from)?));
        }
        "delta_U" => {
            let p = product(params)?;
            return Ok((p.dim(), coproduct_u(&p).map_err(LatticeError::from)?));
        }
        "flatten" => {
            let p = product(params)?;
            return Ok((
                p.dim(),
                flatten_permutation(&p).map_err(LatticeError::from)?,
            ));
        }
        _ => {}
    }

    let d = args
        .d
        .ok_or_else(|| CliError::Usage(format!("operator `{op}` needs --d")))?;
    let cfg = LatticeConfig::new(d, mode)?.with_beta(parse_rational(&args.beta)?)?;
    let no_params = |m: OperatorMatrix| -> Result<OperatorMatrix, CliError> {
        match params {
            None => Ok(m),
            Some(_) => Err(CliError::Usage(format!(
                "operator `{name}` takes no indices"
            ))),
        }
    };
    let one = || -> Result<i64, CliError> { Ok(parse_indices::<1>(op, params.unwrap_or(""))?[0]) };
    let matrix = match name {
        "a" => no_params(make_a(&cfg))?,
        "a_dagger" => no_params(make_a_dagger(&cfg))?,
        "U" => no_params(make_u(&cfg))?,
        "V" => no_params(make_v(&cfg))?,
        "X" => no_params(position_x(&cfg)?)?,
        "P" => proj_p(&cfg, non_negative(op, one()?)?)?,
        "R" => proj_r(&cfg, non_negative(op, one()?)?)?,
        "sP" => proj_script_p(&cfg, one()?),
        "sR" => proj_script_r(&cfg, one()?),
        "e" => {
            let [m, n] = parse_indices::<2>(op, params.unwrap_or(""))?;
            let (m, n) = (non_negative(op, m)?, non_negative(op, n)?);
            match args.rep {
                Rep::Shift => matrix_unit_shift(&cfg, m, n)?,
                Rep::Schwinger => matrix_unit_schwinger(&cfg, m, n)?,
            }
        }
        _ => return Err(CliError::Usage(format!("unknown operator `{op}`"))),
    };
    Ok((d, matrix))
}

fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(c) => {
            let num: Vec<String> = c.coeffs().iter().map(|r| r.numer().to_string()).collect();
            let den: Vec<String> = c.coeffs().iter().map(|r| r.denom().to_string()).collect();
            json!({ "num": num, "den": den })
        }
        Scalar::Float(z) => json!({ "re": z.re, "im": z.im }),
    }
}

/// Matrix dump document. Exact entries are coefficient vectors over
/// `1, q, ..., q^(phi(c)-1)` with `q = exp(2πi/c)`, `c` the `conductor` field.
pub fn dump_json(op: &str, d: usize, m: &OperatorMatrix) -> Value {
    let entries: Vec<Vec<Value>> = (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| scalar_json(&m.get(i, j))).collect())
        .collect();
    let mut obj = Map::new();
    obj.insert("d".into(), json!(d));
    obj.insert("dim".into(), json!(m.dim()));
    let mode = if m.is_exact() {
        Mode::Exact
    } else {
        Mode::Float
    };
    obj.insert("mode".into(), json!(mode.as_str()));
    if let crate::matrix::ScalarField::Exact { conductor } = m.field() {
        obj.insert("conductor".into(), json!(conductor));
    }
    obj.insert("op".into(), json!(op));
    obj.insert("entries".into(), json!(entries));
    Value::Object(obj)
}

pub fn dump_text(m: &OperatorMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let s = m.get(i, j);
                if s.is_zero() {
                    "0".to_string()
                } else {
                    s.to_string()
                }
            })
            .collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn cmd_emit(args: &EmitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (d, matrix) = build_operator(args)?;
    let body = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&dump_json(&args.op, d, &matrix))
                .expect("dump serializes");
            s.push('\n');
            s
        }
        Format::Text => dump_text(&matrix),
    };
    write_output(&args.output, &body, stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_ranges() {
        assert_eq!(parse_d_range("5").unwrap(), vec![5]);
        assert_eq!(parse_d_range("2..4").unwrap(), vec![2, 3, 4]);
        assert!(matches!(
            parse_d_range("1"),
            Err(CliError::Lattice(LatticeError::InvalidSize(1)))
        ));
        assert!(parse_d_range("5..3").is_err());
        assert!(parse_d_range("x").is_err());
    }

    #[test]
    fn tensor_pairs() {
        assert_eq!(parse_tensor_pairs("4x3,3x5").unwrap(), vec![(4, 3), (3, 5)]);
        assert!(parse_tensor_pairs("4-3").is_err());
    }

    #[test]
    fn suite_lists() {
        assert_eq!(parse_suites("all").unwrap().len(), 8);
        assert_eq!(
            parse_suites("proj_PR,schwinger,proj_PR").unwrap(),
            vec![Suite::Schwinger, Suite::ProjPR]
        );
        assert!(parse_suites("bogus").is_err());
    }

    #[test]
    fn rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), r(-3, 2));
        assert_eq!(parse_rational("3/2").unwrap(), r(3, 2));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(!parse_rational("0.5").unwrap().is_zero());
    }

    #[test]
    fn residual_strings() {
        assert_eq!(format_residual(0.0), "0");
        assert_eq!(format_residual(1.5), "1.5e0");
    }
}
