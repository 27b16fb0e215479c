//! The `superfield` command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::json::{derivation_to_json, element_to_json, DerivationJson, TermJson};
use crate::linalg::ExactMatrix;
use crate::quadric::{verify_dh_action, verify_closed_stalks, verify_w_action, QuotientRing};
use crate::report::{layer_table, Report};
use crate::scalar::Scalar;
use crate::text::{format_derivation, format_element, format_field, parse_derivation, parse_element, parse_field};
use crate::vectorial::{
    all_triples, conformal_factor, dh_basis, dimension_table, h_basis, hamiltonian_defect, jacobi_check,
    jacobi_random, verify_dh_structure, w_basis, w_full_basis, QuadraticForm,
};
use crate::{Derivation, Field, Rational};

pub const MAX_DIMS_N: usize = 12;
pub const MAX_KERNEL_N: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "superfield", version, about = "Exact computations with vector fields on the superpoint")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Number of odd (and even) variables.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Gram matrix of ω: `standard` or a file holding n and then n rows of n rationals.
    #[arg(long, global = true, default_value = "standard")]
    pub omega: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Restrict chart-based checks to the chart `x_i ≠ 0` (1-based).
    #[arg(long, global = true)]
    pub chart: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    W,
    H,
    Dh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verification {
    /// Structure of DH(ω): scalar multipliers, DH = H + QE, [E, H] ⊆ H.
    #[value(name = "lemma11", alias = "dh-structure")]
    DhStructure,
    /// Closed elements of the stalks on P(V), checked pointwise.
    #[value(name = "lemma21", alias = "closed-stalks")]
    ClosedStalks,
    /// W_n acting on the charts of P(V).
    Waction,
    /// DH(ω) acting on A/ωA.
    Dhaction,
    /// Graded Jacobi identity on W_n.
    Jacobi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-degree dimensions of W_n, H(ω) and DH(ω).
    Dims,
    /// A basis of one layer.
    Basis {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[arg(long, value_enum, default_value_t = Kind::W)]
        kind: Kind,
    },
    /// Superbracket of two fields.
    Bracket { lhs: String, rhs: String },
    /// The extension commuting with d.
    Extend { field: String },
    /// δ̃ω and the verdict H / DH / neither.
    Defect { field: String },
    /// Run a named verification.
    Verify { which: Verification },
    /// Normal form of an element modulo ω.
    Quotient { element: String },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn parse_omega_text(text: &str) -> CliResult<QuadraticForm> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::Usage("omega file must start with n".into()))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let t = tokens
                .next()
                .ok_or_else(|| CliError::Usage(format!("omega file: missing entry ({}, {})", i + 1, j + 1)))?;
            row.push(
                Rational::parse_scalar(t)
                    .ok_or_else(|| CliError::Usage(format!("omega file: bad rational {t:?}")))?,
            );
        }
        rows.push(row);
    }
    if tokens.next().is_some() {
        return usage("omega file: trailing entries");
    }
    Ok(QuadraticForm::new(ExactMatrix::from_rows(rows)?)?)
}

fn load_omega(common: &Common, n: usize) -> CliResult<QuadraticForm> {
    if common.omega == "standard" {
        return Ok(QuadraticForm::standard(n));
    }
    let text = std::fs::read_to_string(&common.omega).map_err(|e| CliError::Usage(format!("{}: {e}", common.omega)))?;
    let omega = parse_omega_text(&text)?;
    if omega.n() != n {
        return usage(format!("omega has size {} but n = {n}", omega.n()));
    }
    Ok(omega)
}

/// Largest variable index mentioned in the inputs.
fn infer_n(texts: &[&str]) -> usize {
    let mut n = 1;
    for t in texts {
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if matches!(chars[i], 'x' | 'i' | 'ξ') && chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let s: String = chars[start..end].iter().collect();
                n = n.max(s.parse().unwrap_or(1));
                i = end;
            } else {
                i += 1;
            }
        }
    }
    n
}

fn require_n(common: &Common, lo: usize, hi: usize) -> CliResult<usize> {
    match common.n {
        None => usage("--n is required"),
        Some(n) if n < lo || n > hi => usage(format!("--n must lie in {lo}..={hi} for this command, got {n}")),
        Some(n) => Ok(n),
    }
}

fn n_for(common: &Common, texts: &[&str]) -> CliResult<usize> {
    let n = common.n.unwrap_or_else(|| infer_n(texts));
    if n == 0 || n > MAX_KERNEL_N {
        return usage(format!("--n must lie in 1..={MAX_KERNEL_N}, got {n}"));
    }
    Ok(n)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn field_json(f: &Field) -> DerivationJson {
    let mut j = derivation_to_json(&f.as_derivation());
    j.degree = Some(f.degree());
    j
}

fn render_report(report: &Report, format: Format) -> Outcome {
    let output = match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    Outcome { output, passed: report.passed() }
}

fn cmd_dims(common: &Common) -> CliResult<Outcome> {
    let n = require_n(common, 1, MAX_DIMS_N)?;
    let omega = load_omega(common, n)?;
    let mut report = Report::new(n, omega.rows_as_strings());
    report.layers = dimension_table(n, &omega, n <= MAX_KERNEL_N)?;
    let output = match common.format {
        Format::Text => {
            let mut s = format!("n = {n}\n");
            s.push_str(&layer_table(&report.layers));
            s
        }
        Format::Json => json(&report),
    };
    Ok(Outcome { output, passed: true })
}

#[derive(Serialize)]
struct BasisJson {
    n: usize,
    k: i32,
    kind: &'static str,
    basis: Vec<DerivationJson>,
    text: Vec<String>,
}

fn cmd_basis(common: &Common, k: i32, kind: Kind) -> CliResult<Outcome> {
    let n = require_n(common, 1, MAX_KERNEL_N)?;
    if k < -1 || k >= n as i32 {
        return usage(format!("--k must lie in -1..={}", n as i32 - 1));
    }
    let (basis, label) = match kind {
        Kind::W => (w_basis(n, k).basis, "W"),
        Kind::H => (h_basis(n, &load_omega(common, n)?, k)?.basis, "H"),
        Kind::Dh => (dh_basis(n, &load_omega(common, n)?, k)?.subspace.basis, "DH"),
    };
    let text: Vec<String> = basis.iter().map(format_field).collect();
    let output = match common.format {
        Format::Text => {
            let mut s = format!("{label}_{k} for n = {n}: dimension {}\n", basis.len());
            for t in &text {
                let _ = writeln!(s, "{t}");
            }
            s
        }
        Format::Json => json(&BasisJson { n, k, kind: label, basis: basis.iter().map(field_json).collect(), text }),
    };
    Ok(Outcome { output, passed: true })
}

#[derive(Serialize)]
struct DerivationResult {
    n: usize,
    result: String,
    derivation: DerivationJson,
}

fn derivation_outcome(common: &Common, n: usize, d: &Derivation, text: String) -> Outcome {
    let output = match common.format {
        Format::Text => format!("{text}\n"),
        Format::Json => json(&DerivationResult { n, result: text, derivation: derivation_to_json(d) }),
    };
    Outcome { output, passed: true }
}

fn cmd_bracket(common: &Common, lhs: &str, rhs: &str) -> CliResult<Outcome> {
    let n = n_for(common, &[lhs, rhs])?;
    if let (Ok(a), Ok(b)) = (parse_field::<Rational>(lhs, n), parse_field::<Rational>(rhs, n)) {
        let c = a.bracket(&b)?;
        let mut d = c.as_derivation();
        if c.is_zero() {
            d = Derivation::zero(n, c.parity());
        }
        return Ok(derivation_outcome(common, n, &d, format_field(&c)));
    }
    let a = parse_derivation::<Rational>(lhs, n)?;
    let b = parse_derivation::<Rational>(rhs, n)?;
    let c = a.bracket(&b)?;
    Ok(derivation_outcome(common, n, &c, format_derivation(&c)))
}

fn cmd_extend(common: &Common, field: &str) -> CliResult<Outcome> {
    let n = n_for(common, &[field])?;
    let f = parse_field::<Rational>(field, n)?;
    let e = f.extend();
    Ok(derivation_outcome(common, n, &e, format_derivation(&e)))
}

#[derive(Serialize)]
struct DefectJson {
    n: usize,
    omega: Vec<Vec<String>>,
    field: String,
    defect: String,
    defect_terms: Vec<TermJson>,
    verdict: &'static str,
    conformal_factor: Option<String>,
}

fn cmd_defect(common: &Common, field: &str) -> CliResult<Outcome> {
    let n = n_for(common, &[field])?;
    let omega = load_omega(common, n)?;
    let f: Field = parse_field(field, n)?;
    let defect = hamiltonian_defect(&f, &omega)?;
    let factor = conformal_factor(&f, &omega)?;
    let verdict = match &factor {
        Some(c) if num_traits::Zero::is_zero(c) => "H",
        Some(_) => "DH",
        None => "none",
    };
    let output = match common.format {
        Format::Text => {
            let mut s = format!("defect: {}\nverdict: {verdict}\n", format_element(&defect));
            if let Some(c) = &factor {
                let _ = writeln!(s, "conformal factor: {c}");
            }
            s
        }
        Format::Json => json(&DefectJson {
            n,
            omega: omega.rows_as_strings(),
            field: format_field(&f),
            defect: format_element(&defect),
            defect_terms: element_to_json(&defect),
            verdict,
            conformal_factor: factor.map(|c| c.to_string()),
        }),
    };
    Ok(Outcome { output, passed: true })
}

#[derive(Serialize)]
struct QuotientJson {
    n: usize,
    omega: Vec<Vec<String>>,
    input: String,
    normal_form: String,
    normal_form_terms: Vec<TermJson>,
    quotient: String,
}

fn cmd_quotient(common: &Common, element: &str) -> CliResult<Outcome> {
    let n = n_for(common, &[element])?;
    let ring = QuotientRing::new(load_omega(common, n)?)?;
    let a = parse_element::<Rational>(element, n)?;
    let div = ring.divide(&a)?;
    let output = match common.format {
        Format::Text => format!(
            "normal form: {}\nquotient: {}\n",
            format_element(&div.remainder),
            format_element(&div.quotient)
        ),
        Format::Json => json(&QuotientJson {
            n,
            omega: ring.omega().rows_as_strings(),
            input: format_element(&a),
            normal_form: format_element(&div.remainder),
            normal_form_terms: element_to_json(&div.remainder),
            quotient: format_element(&div.quotient),
        }),
    };
    Ok(Outcome { output, passed: true })
}

fn cmd_verify(common: &Common, which: Verification) -> CliResult<Outcome> {
    let report = match which {
        Verification::DhStructure => {
            let n = require_n(common, 1, MAX_KERNEL_N)?;
            verify_dh_structure(n, &load_omega(common, n)?)?
        }
        Verification::ClosedStalks => {
            let n = require_n(common, 2, MAX_KERNEL_N)?;
            let chart = match common.chart {
                Some(0) => return usage("--chart is 1-based"),
                c => c.map(|c| c - 1),
            };
            verify_closed_stalks(n, common.samples.unwrap_or(20), common.seed, chart)?
        }
        Verification::Waction => verify_w_action(require_n(common, 2, 5)?)?,
        Verification::Dhaction => {
            let n = require_n(common, 2, 6)?;
            verify_dh_action(n, &load_omega(common, n)?, common.seed)?
        }
        Verification::Jacobi => {
            let n = require_n(common, 1, MAX_KERNEL_N)?;
            let mut report = Report::new(n, Vec::new());
            if n <= 3 && common.samples.is_none() {
                let basis = w_full_basis(n);
                let jr = jacobi_check(&basis, &all_triples(basis.len()))?;
                report.check("jacobi: all basis triples", jr.passed(), format!("{} triples, {} failures", jr.checked, jr.failures.len()));
            } else {
                let samples = common.samples.unwrap_or(500);
                report.seed = Some(common.seed);
                report.samples = Some(samples);
                let jr = jacobi_random(n, samples, common.seed)?;
                report.check("jacobi: random triples", jr.passed(), format!("{} triples, {} failures", jr.checked, jr.failures.len()));
            }
            report
        }
    };
    Ok(render_report(&report, common.format))
}

/// Runs a parsed command line and returns its output without printing it.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Dims => cmd_dims(common),
        Command::Basis { k, kind } => cmd_basis(common, *k, *kind),
        Command::Bracket { lhs, rhs } => cmd_bracket(common, lhs, rhs),
        Command::Extend { field } => cmd_extend(common, field),
        Command::Defect { field } => cmd_defect(common, field),
        Command::Verify { which } => cmd_verify(common, *which),
        Command::Quotient { element } => cmd_quotient(common, element),
    }
}

/// Parses arguments, runs, writes the output and returns the exit code:
/// 0 on success, 1 when a verification fails, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &outcome.output).map_err(|e| CliError::Io(e.to_string())),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        1
    }
}
