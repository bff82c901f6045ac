//! Command-line front end for `hytet`.
//!
//! [`run`] takes the argument list and the three standard streams and
//! returns the process exit code, so the binary and the tests share one
//! entry point.

use std::ffi::OsString;
use std::fmt;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hytet::gram::{angles_to_lengths, classify, lengths_to_angles, GramError};
use hytet::oracle::{oracle_report_from_lengths, OracleError, QuadratureSpec};
use hytet::tolerance::{
    CONGRUENCE, FORMULA_VS_FORMULA, FORMULA_VS_ORACLE, QUADRATIC_RESIDUAL, RESIDUE_REAL,
    RESIDUE_SNAP,
};
use hytet::volume::{congruence_defect, schlafli_defect};
use hytet::{
    volume_from_angles, volume_from_lengths, Angles6, Complex, Lengths6, Shape, VolumeError,
    VolumeResult,
};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_NOT_REALIZABLE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Environment variable overriding the formula-vs-oracle tolerance of `check`.
pub const TOL_VAR: &str = "HYTET_TOL";

/// Step for the finite-difference rows of `check`.
const CHECK_STEP: f64 = 1e-5;
const SCHLAFLI_LIMIT: f64 = 1e-6;
const ROUNDTRIP_LIMIT: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "hytet", version, about = "Volumes of hyperbolic tetrahedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Volume from six lengths or six dihedral angles.
    Vol {
        #[command(flatten)]
        input: Input,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Dihedral angles from lengths, or lengths from angles.
    Convert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Run the invariant suite on one tetrahedron.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Volume by numerical integration in the Klein model.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Relative tolerance of the adaptive quadrature.
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Volumes for a file of records, one JSON line per record.
    Batch {
        /// Input file, or `-` for standard input.
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        format: BatchFormat,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Six edge lengths l1,...,l6.
    #[arg(long, allow_hyphen_values = true)]
    lengths: Option<String>,
    /// Six dihedral angles A1,...,A6 in radians.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BatchFormat {
    Csv,
    Jsonl,
}

/// A failure with its exit code; the message goes to the diagnostic stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn gram_code(e: &GramError) -> i32 {
    match e {
        GramError::InvalidAngle { .. } | GramError::InvalidLength { .. } => EXIT_MALFORMED,
        _ => EXIT_NOT_REALIZABLE,
    }
}

impl From<GramError> for Failure {
    fn from(e: GramError) -> Self {
        Self {
            code: gram_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<VolumeError> for Failure {
    fn from(e: VolumeError) -> Self {
        let code = match &e {
            VolumeError::Gram(g) => gram_code(g),
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match &e {
            OracleError::Gram(g) => gram_code(g),
            OracleError::InvalidSpec(_) => EXIT_MALFORMED,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// A parsed tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tetrahedron {
    Lengths(Lengths6),
    Angles(Angles6),
}

impl Tetrahedron {
    pub fn parse(kind: &str, values: &[f64]) -> Result<Self, Failure> {
        let values: [f64; 6] = values.try_into().map_err(|_| {
            Failure::malformed(format!("expected 6 values, found {}", values.len()))
        })?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Failure::malformed(format!("value {} is not finite", i + 1)));
        }
        match kind {
            "lengths" => Ok(Self::Lengths(Lengths6::new(values)?)),
            "angles" => Ok(Self::Angles(Angles6::new(values)?)),
            other => Err(Failure::malformed(format!(
                "unknown kind `{other}`, expected `lengths` or `angles`"
            ))),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Lengths(_) => "lengths",
            Self::Angles(_) => "angles",
        }
    }

    fn values(&self) -> [f64; 6] {
        match self {
            Self::Lengths(l) => l.values(),
            Self::Angles(a) => a.values(),
        }
    }

    pub fn volume(&self) -> Result<VolumeResult, Failure> {
        Ok(match self {
            Self::Lengths(l) => volume_from_lengths(l)?,
            Self::Angles(a) => volume_from_angles(a)?,
        })
    }

    fn lengths(&self) -> Result<Lengths6, Failure> {
        match self {
            Self::Lengths(l) => Ok(*l),
            Self::Angles(a) => Ok(angles_to_lengths(a)?),
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Failure::malformed(format!("`{s}` is not a number")))
        })
        .collect()
}

impl Input {
    fn tetrahedron(&self) -> Result<Tetrahedron, Failure> {
        match (&self.lengths, &self.angles) {
            (Some(l), None) => Tetrahedron::parse("lengths", &parse_list(l)?),
            (None, Some(a)) => Tetrahedron::parse("angles", &parse_list(a)?),
            _ => Err(Failure::malformed(
                "give exactly one of --lengths or --angles",
            )),
        }
    }
}

/// Plain numeric output: fixed point with 12 decimals.
pub fn plain(x: f64) -> String {
    format!("{x:.12}")
}

fn complex_json(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// The JSON form of a volume result.
pub fn result_json(r: &VolumeResult) -> Value {
    json!({
        "volume": r.volume,
        "shape": r.shape.as_str(),
        "z_minus": complex_json(r.z_pair.z_minus),
        "z_plus": complex_json(r.z_pair.z_plus),
        "residues": [r.residues.0, r.residues.1],
        "partials": r.partials,
        "diagnostics": r.diagnostics,
    })
}

/// Process environment consulted by [`run`].
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub tol: Option<String>,
}

impl Env {
    pub fn from_process() -> Self {
        Self {
            tol: std::env::var(TOL_VAR).ok(),
        }
    }

    fn oracle_tolerance(&self) -> Result<f64, Failure> {
        match &self.tol {
            None => Ok(FORMULA_VS_ORACLE),
            Some(s) => match s.trim().parse::<f64>() {
                Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
                _ => Err(Failure::malformed(format!(
                    "{TOL_VAR}=`{s}` is not a positive number"
                ))),
            },
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code. Results go to `out`, errors to `err`.
pub fn run<I, T>(
    args: I,
    env: &Env,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Vol { input, json } => vol(&input, json, out),
        Command::Convert { input, json } => convert(&input, json, out),
        Command::Check { input, json } => check(&input, json, env, out),
        Command::Oracle {
            input,
            rel_tol,
            json,
        } => oracle(&input, rel_tol, json, out),
        Command::Batch { input, format } => batch(&input, format, stdin, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_NUMERICAL,
        message: format!("write failed: {e}"),
    }
}

fn emit(out: &mut dyn Write, line: impl fmt::Display) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(io_failure)
}

fn vol(input: &Input, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let r = input.tetrahedron()?.volume()?;
    if json {
        emit(out, result_json(&r))?;
    } else {
        emit(out, plain(r.volume))?;
    }
    Ok(EXIT_OK)
}

fn convert(input: &Input, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let converted = match input.tetrahedron()? {
        Tetrahedron::Lengths(l) => Tetrahedron::Angles(lengths_to_angles(&l)?),
        Tetrahedron::Angles(a) => Tetrahedron::Lengths(angles_to_lengths(&a)?),
    };
    if json {
        emit(
            out,
            json!({ "kind": converted.kind(), "values": converted.values() }),
        )?;
    } else {
        let parts: Vec<String> = converted.values().iter().map(f64::to_string).collect();
        emit(out, parts.join(","))?;
    }
    Ok(EXIT_OK)
}

fn oracle(input: &Input, rel_tol: f64, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = input.tetrahedron()?.lengths()?;
    let report = oracle_report_from_lengths(&l, &QuadratureSpec::with_rel_tol(rel_tol))?;
    if json {
        emit(
            out,
            json!({
                "volume": report.value,
                "error_estimate": report.error_estimate,
                "cells": report.cells,
            }),
        )?;
    } else {
        emit(out, plain(report.value))?;
    }
    Ok(EXIT_OK)
}

/// One row of the `check` table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub detail: Option<String>,
}

impl CheckRow {
    fn measured(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            detail: None,
        }
    }

    fn from_result(name: &'static str, r: Result<f64, Failure>, limit: f64) -> Self {
        match r {
            Ok(v) => Self::measured(name, v, limit),
            Err(f) => Self {
                name,
                value: f64::NAN,
                limit,
                detail: Some(f.message),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.detail.is_none() && self.value < self.limit
    }
}

fn max_gap(a: [f64; 6], b: [f64; 6]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The invariant suite for one tetrahedron. Rows that need a hyperbolic
/// tetrahedron are omitted for Euclidean and spherical angle input.
pub fn check_rows(t: &Tetrahedron, oracle_tol: f64) -> Result<Vec<CheckRow>, Failure> {
    let r = t.volume()?;
    let d = |k: &str| r.diagnostics.get(k).copied().unwrap_or(f64::NAN);
    let mut rows = vec![
        CheckRow::measured(
            "quadratic residual",
            d("quadratic_residual"),
            QUADRATIC_RESIDUAL,
        ),
        CheckRow::measured(
            "residue snap",
            d("residue_snap"),
            RESIDUE_SNAP + d("residue_allowance"),
        ),
        CheckRow::measured(
            "residue real part",
            d("residue_real"),
            RESIDUE_REAL + d("residue_allowance"),
        ),
    ];
    if r.shape != Shape::Hyperbolic {
        return Ok(rows);
    }
    let (l, a) = match t {
        Tetrahedron::Lengths(l) => (*l, lengths_to_angles(l)?),
        Tetrahedron::Angles(a) => (angles_to_lengths(a)?, *a),
    };
    let by_lengths = volume_from_lengths(&l).map_err(Failure::from);
    let by_angles = volume_from_angles(&a).map_err(Failure::from);
    let formula = match (&by_lengths, &by_angles) {
        (Ok(x), Ok(y)) => Ok((x.volume - y.volume).abs()),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    rows.push(CheckRow::from_result(
        "length vs angle formula",
        formula,
        FORMULA_VS_FORMULA,
    ));
    let oracle = oracle_report_from_lengths(&l, &QuadratureSpec::default())
        .map_err(Failure::from)
        .map(|o| (o.value - r.volume).abs());
    rows.push(CheckRow::from_result(
        "formula vs oracle",
        oracle,
        oracle_tol,
    ));
    let congruence = by_lengths.and_then(|x| {
        x.partials
            .map(|p| congruence_defect(&p, &a))
            .ok_or_else(|| Failure::malformed("no partials"))
    });
    rows.push(CheckRow::from_result(
        "2 dV/dl ≡ A (mod π)",
        congruence,
        CONGRUENCE,
    ));
    let schlafli = schlafli_defect(&a, CHECK_STEP).map_err(Failure::from);
    rows.push(CheckRow::from_result(
        "Schläfli identity",
        schlafli,
        SCHLAFLI_LIMIT,
    ));
    let roundtrip = match t {
        Tetrahedron::Lengths(l) => lengths_to_angles(l)
            .and_then(|a| angles_to_lengths(&a))
            .map(|back| max_gap(l.values(), back.values())),
        Tetrahedron::Angles(a) => angles_to_lengths(a)
            .and_then(|l| lengths_to_angles(&l))
            .map(|back| max_gap(a.values(), back.values())),
    }
    .map_err(Failure::from);
    rows.push(CheckRow::from_result(
        "conversion roundtrip",
        roundtrip,
        ROUNDTRIP_LIMIT,
    ));
    Ok(rows)
}

fn check(input: &Input, json: bool, env: &Env, out: &mut dyn Write) -> Result<i32, Failure> {
    let oracle_tol = env.oracle_tolerance()?;
    let t = input.tetrahedron()?;
    if let Tetrahedron::Angles(a) = &t {
        if classify(a) == Shape::NotRealizable {
            return Err(GramError::NotRealizable.into());
        }
    }
    let rows = check_rows(&t, oracle_tol)?;
    let all = rows.iter().all(CheckRow::passed);
    if json {
        let items: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "passed": r.passed(),
                    "value": r.value,
                    "limit": r.limit,
                    "detail": r.detail,
                })
            })
            .collect();
        emit(out, json!({ "passed": all, "rows": items }))?;
    } else {
        for r in &rows {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let measured = match &r.detail {
                Some(d) => d.clone(),
                None => format!("{:.3e}", r.value),
            };
            emit(
                out,
                format!(
                    "{status}  {:<26} {measured} (limit {:.1e})",
                    r.name, r.limit
                ),
            )?;
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_NUMERICAL })
}

#[derive(Deserialize)]
struct JsonRecord {
    kind: String,
    values: Vec<f64>,
}

/// One batch input record: a parsed tetrahedron or the reason it was
/// rejected.
type Record = Result<Tetrahedron, Failure>;

const CSV_HEADER: [&str; 7] = ["kind", "v1", "v2", "v3", "v4", "v5", "v6"];

fn csv_records(text: &str) -> Result<Vec<Record>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Failure::malformed(format!("unreadable CSV header: {e}")))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Failure::malformed(format!(
            "CSV header must be `{}`",
            CSV_HEADER.join(",")
        )));
    }
    Ok(reader
        .records()
        .map(|row| {
            let row = row.map_err(|e| Failure::malformed(format!("unreadable row: {e}")))?;
            let kind = row.get(0).unwrap_or_default();
            let values = row.iter().skip(1).map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Failure::malformed(format!("`{s}` is not a number")))
            });
            Tetrahedron::parse(kind, &values.collect::<Result<Vec<f64>, _>>()?)
        })
        .collect())
}

fn jsonl_records(text: &str) -> Vec<Record> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let r: JsonRecord = serde_json::from_str(line)
                .map_err(|e| Failure::malformed(format!("unreadable record: {e}")))?;
            Tetrahedron::parse(&r.kind, &r.values)
        })
        .collect()
}

fn batch_line(index: usize, record: &Record) -> Value {
    let outcome = record
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|t| Ok((t, t.volume()?)));
    match outcome {
        Ok((t, r)) => json!({
            "index": index,
            "kind": t.kind(),
            "values": t.values(),
            "result": result_json(&r),
        }),
        Err(f) => json!({
            "index": index,
            "error": { "code": f.code, "message": f.message },
        }),
    }
}

fn batch(
    path: &str,
    format: BatchFormat,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut text = String::new();
    let read = if path == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::malformed(format!("cannot read `{path}`: {e}")))?;
    let records = match format {
        BatchFormat::Csv => csv_records(&text)?,
        BatchFormat::Jsonl => jsonl_records(&text),
    };
    let lines: Vec<Value> = records
        .par_iter()
        .enumerate()
        .map(|(i, r)| batch_line(i, r))
        .collect();
    for line in lines {
        emit(out, line)?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], env: &Env, stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hytet").chain(args.iter().copied());
        let code = run(argv, env, &mut stdin.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn plain_format_has_twelve_decimals() {
        assert_eq!(plain(0.0), "0.000000000000");
        assert_eq!(plain(1.0), "1.000000000000");
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_list("1,x").unwrap_err().code, EXIT_MALFORMED);
    }

    #[test]
    fn tetrahedron_parsing_errors() {
        assert_eq!(
            Tetrahedron::parse("lengths", &[1.0; 5]).unwrap_err().code,
            EXIT_MALFORMED
        );
        assert_eq!(
            Tetrahedron::parse("lengths", &[-1.0; 6]).unwrap_err().code,
            EXIT_MALFORMED
        );
        assert_eq!(
            Tetrahedron::parse("angles", &[4.0; 6]).unwrap_err().code,
            EXIT_MALFORMED
        );
        assert_eq!(
            Tetrahedron::parse("edges", &[1.0; 6]).unwrap_err().code,
            EXIT_MALFORMED
        );
        assert_eq!(
            Tetrahedron::parse("lengths", &[1.0, 1.0, 1.0, 1.0, 1.0, f64::NAN])
                .unwrap_err()
                .code,
            EXIT_MALFORMED
        );
    }

    #[test]
    fn error_codes_by_kind() {
        assert_eq!(
            Failure::from(GramError::NotRealizable).code,
            EXIT_NOT_REALIZABLE
        );
        assert_eq!(Failure::from(VolumeError::PathStall).code, EXIT_NUMERICAL);
        assert_eq!(
            Failure::from(OracleError::NotConverged {
                cells: 1,
                estimate: 1.0
            })
            .code,
            EXIT_NUMERICAL
        );
        assert_eq!(
            Failure::from(OracleError::InvalidSpec("x")).code,
            EXIT_MALFORMED
        );
    }

    #[test]
    fn tolerance_override() {
        let env = Env {
            tol: Some("1e-3".into()),
        };
        assert_eq!(env.oracle_tolerance().unwrap(), 1e-3);
        assert_eq!(
            Env::default().oracle_tolerance().unwrap(),
            FORMULA_VS_ORACLE
        );
        let bad = Env {
            tol: Some("-1".into()),
        };
        assert_eq!(bad.oracle_tolerance().unwrap_err().code, EXIT_MALFORMED);
    }

    #[test]
    fn csv_header_is_enforced() {
        assert!(csv_records("").unwrap().is_empty());
        assert_eq!(csv_records("a,b\n1,2\n").unwrap_err().code, EXIT_MALFORMED);
        let rows =
            csv_records("kind,v1,v2,v3,v4,v5,v6\nlengths,1,1,1,1,1,1\nlengths,1,1\n").unwrap();
        assert!(rows[0].is_ok());
        assert!(rows[1].is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, out, err) = run_str(&["vol"], &Env::default(), "");
        assert_eq!(code, EXIT_MALFORMED);
        assert!(out.is_empty());
        assert!(!err.is_empty());
        let (code, out, _) = run_str(&["--help"], &Env::default(), "");
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("Usage"));
    }
}
