//! Command-line front end.
//!
//! [`run`] takes the argument list and returns the exit code together with
//! the text for stdout and stderr, so the whole CLI is testable in-process.
//! Exit codes: 0 when every residual is within tolerance, 1 when one is not,
//! 2 on usage, parse or input errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Hypercomplex, Octonion, Quaternion};
use crate::barred::{Axis, BarredOperator, RealMatrix4};
use crate::calculus::numeric::{DEFAULT_AXIS_EPS, DEFAULT_H};
use crate::calculus::{
    complex_cr_residual, directional_cr_residuals, fueter_residual, local_cr_batch,
    local_cr_residual_octonion, naive_cr_residual, Condition, FdConfig, ResidualReport,
};
use crate::constraints::{build_system, solve, CoefficientSpace, DerivativeAnsatz};
use crate::error::Error;
use crate::parser::{eval_expr, eval_expr_octonion, parse_with, to_polynomial, ParseError, ParseOptions};
use crate::poly::{QPolynomial, Side};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_NUMERIC_TOL: f64 = 1e-6;
pub const DEFAULT_SYMBOLIC_TOL: f64 = 1e-10;
pub const DEFAULT_RANDOM_POINTS: usize = 100;

const SHELL_MIN: f64 = 0.5;
const SHELL_MAX: f64 = 2.0;
const UNITS: [&str; 4] = ["1", "i", "j", "k"];

#[derive(Debug, Parser)]
#[command(name = "hypercalc", version, about = "Quaternion and octonion calculus checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an analyticity condition on an expression in q.
    Check(CheckArgs),
    /// Solve the linear constraints on a constant-coefficient derivative.
    SolveGlobal(SolveArgs),
    /// Print multiplication, composition or projector tables.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckCondition {
    LocalCr,
    Fueter,
    Naive,
    Directional,
    ComplexCr,
}

impl CheckCondition {
    fn is_numeric(self) -> bool {
        self == Self::LocalCr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub condition: CheckCondition,
    /// Expression in q, e.g. "q^2 + i*q".
    #[arg(long)]
    pub expr: String,
    /// CSV file with one point per row (4 or 8 reals, '#' starts a comment).
    #[arg(long, conflicts_with = "random")]
    pub points: Option<PathBuf>,
    /// Number of random points on the shell 0.5 <= |q| <= 2.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_H)]
    pub h: f64,
    #[arg(long, default_value_t = DEFAULT_AXIS_EPS)]
    pub axis_eps: f64,
    /// Pass threshold; defaults to 1e-6 for local-cr and 1e-10 otherwise.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Treat q as an octonion (local-cr only).
    #[arg(long)]
    pub octonion: bool,
    /// Side of the Fueter operator.
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    /// Comma-separated orders n for which d/dq q^n = n q^(n-1) must hold.
    #[arg(long, value_delimiter = ',', required = true)]
    pub orders: Vec<u32>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Plain,
    Barred,
}

impl From<SpaceArg> for CoefficientSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Plain => CoefficientSpace::Plain,
            SpaceArg::Barred => CoefficientSpace::Barred,
        }
    }
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(value_enum)]
    pub which: TableKind,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Qmul,
    Omul,
    BarredCompose,
    Projectors,
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self { code, stdout, stderr: String::new() }
    }

    fn usage(stderr: String) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(EXIT_PASS, text)
            };
        }
    };
    match cli.command {
        Command::Check(a) => cmd_check(&a),
        Command::SolveGlobal(a) => cmd_solve_global(&a),
        Command::Tables(a) => cmd_tables(&a),
    }
}

/// Formats a parse error with a caret line under the offending input.
pub fn render_parse_error(src: &str, err: &ParseError) -> String {
    let span = err.span();
    let col = src[..span.start.min(src.len())].chars().count();
    let width = src
        .get(span.start..span.end)
        .map_or(1, |s| s.chars().count())
        .max(1);
    format!("error: {err}\n  {src}\n  {}{}\n", " ".repeat(col), "^".repeat(width))
}

fn render_error(src: &str, err: &Error) -> String {
    match err {
        Error::Parse(p) => render_parse_error(src, p),
        other => format!("error: {other}\n"),
    }
}

/// Uniform samples from the shell `0.5 <= |p| <= 2` whose vector part is at
/// least `axis_eps` long, by rejection from the enclosing cube.
pub fn shell_points<T: Hypercomplex>(seed: u64, n: usize, axis_eps: f64) -> Vec<T> {
    assert!(axis_eps < SHELL_MAX, "axis_eps leaves no admissible points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut p = T::zero();
        for c in 0..T::DIM {
            p.set_coord(c, rng.gen_range(-SHELL_MAX..=SHELL_MAX));
        }
        if (SHELL_MIN..=SHELL_MAX).contains(&p.norm()) && p.vector_norm() >= axis_eps {
            out.push(p);
        }
    }
    out
}

/// Reads points from CSV text: `dim` reals per record, `#` comments.
pub fn read_points_csv(text: &str, dim: usize) -> Result<Vec<Vec<f64>>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != dim {
            return Err(format!("line {line}: expected {dim} values, found {}", record.len()));
        }
        let values = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| format!("line {line}: invalid number '{f}'"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(values);
    }
    Ok(points)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
enum PointSource {
    Random { count: usize },
    Csv { path: String },
}

#[derive(Debug, Clone, Serialize)]
struct CheckConfig {
    command: &'static str,
    condition: CheckCondition,
    expr: String,
    octonion: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<PointSource>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis_eps: Option<f64>,
    tol: f64,
    format: OutputFormat,
}

#[derive(Debug, Clone, Serialize)]
struct PointRow {
    index: usize,
    #[serde(flatten)]
    report: ResidualReport,
}

#[derive(Debug, Clone, Serialize)]
struct SymbolicRow {
    condition: Condition,
    label: &'static str,
    residual: QPolynomial,
    residual_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
struct PointIssue {
    index: usize,
    kind: &'static str,
    message: String,
}

#[derive(Debug, Clone, Serialize)]
struct Summary {
    max_residual: f64,
    pass: bool,
    evaluated: usize,
    skipped: usize,
    errors: usize,
}

#[derive(Debug, Clone, Serialize)]
struct CheckReport<R> {
    config: CheckConfig,
    rows: Vec<R>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    issues: Vec<PointIssue>,
    summary: Summary,
}

fn summarize(norms: impl Iterator<Item = f64>, skipped: usize, errors: usize, tol: f64) -> Summary {
    let norms: Vec<f64> = norms.collect();
    let max_residual = norms.iter().copied().fold(0.0, f64::max);
    let pass = errors == 0 && !norms.is_empty() && max_residual <= tol;
    Summary { max_residual, pass, evaluated: norms.len(), skipped, errors }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let numeric = a.condition.is_numeric();
    if a.octonion && !numeric {
        return Outcome::usage("error: --octonion is only supported by local-cr\n".into());
    }
    let tol = a.tol.unwrap_or(if numeric { DEFAULT_NUMERIC_TOL } else { DEFAULT_SYMBOLIC_TOL });
    if !(tol > 0.0 && tol.is_finite()) {
        return Outcome::usage(format!("error: --tol must be positive, got {tol}\n"));
    }
    let expr = match parse_with(&a.expr, ParseOptions { octonion: a.octonion }) {
        Ok(e) => e,
        Err(e) => return Outcome::usage(render_parse_error(&a.expr, &e)),
    };
    let config = CheckConfig {
        command: "check",
        condition: a.condition,
        expr: a.expr.clone(),
        octonion: a.octonion,
        side: (a.condition == CheckCondition::Fueter).then(|| a.side.into()),
        points: numeric.then(|| match &a.points {
            Some(p) => PointSource::Csv { path: p.display().to_string() },
            None => PointSource::Random { count: a.random.unwrap_or(DEFAULT_RANDOM_POINTS) },
        }),
        seed: a.seed,
        h: numeric.then_some(a.h),
        axis_eps: numeric.then_some(a.axis_eps),
        tol,
        format: a.format,
    };
    let result = if numeric {
        check_numeric(a, &expr, config)
    } else {
        check_symbolic(a, &expr, config)
    };
    result.unwrap_or_else(|e| Outcome::usage(render_error(&a.expr, &e)))
}

fn load_points<T: Hypercomplex>(a: &CheckArgs) -> Result<Vec<T>, Error> {
    match &a.points {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
            let rows = read_points_csv(&text, T::DIM)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
            Ok(rows.iter().map(|r| T::from_coords(r)).collect())
        }
        None => {
            if !(a.axis_eps > 0.0 && a.axis_eps < SHELL_MAX) {
                return Err(Error::InvalidConfig(format!(
                    "axis_eps = {} must lie in (0, {SHELL_MAX})",
                    a.axis_eps
                )));
            }
            Ok(shell_points(a.seed, a.random.unwrap_or(DEFAULT_RANDOM_POINTS), a.axis_eps))
        }
    }
}

fn check_numeric(a: &CheckArgs, expr: &crate::parser::Expr, config: CheckConfig) -> Result<Outcome, Error> {
    let cfg = FdConfig { h: a.h, axis_eps: a.axis_eps, ..FdConfig::default() };
    cfg.validate()?;
    let results = if a.octonion {
        let points: Vec<Octonion> = load_points(a)?;
        let nan = Octonion([f64::NAN; 8]);
        let f = |o: Octonion| eval_expr_octonion(expr, o).unwrap_or(nan);
        points.par_iter().map(|&o| local_cr_residual_octonion(f, o, &cfg)).collect::<Vec<_>>()
    } else {
        eval_expr(expr, Quaternion::ONE)?;
        let points: Vec<Quaternion> = load_points(a)?;
        let nan = Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN);
        let f = |q: Quaternion| eval_expr(expr, q).unwrap_or(nan);
        local_cr_batch(&f, &points, &cfg, true)
    };

    let mut rows = Vec::new();
    let mut issues = Vec::new();
    let (mut skipped, mut errors) = (0, 0);
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(report) => rows.push(PointRow { index, report }),
            Err(e @ Error::NearRealAxis { .. }) => {
                skipped += 1;
                issues.push(PointIssue { index, kind: "skipped", message: e.to_string() });
            }
            Err(e) => {
                errors += 1;
                issues.push(PointIssue { index, kind: "error", message: e.to_string() });
            }
        }
    }
    let summary = summarize(rows.iter().map(|r| r.report.residual_norm), skipped, errors, config.tol);
    let code = if summary.pass { EXIT_PASS } else { EXIT_FAIL };
    let report = CheckReport { config, rows, issues, summary };
    let out = match a.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => numeric_csv(&report, if a.octonion { 8 } else { 4 }),
    };
    Ok(Outcome::ok(code, out))
}

fn check_symbolic(a: &CheckArgs, expr: &crate::parser::Expr, config: CheckConfig) -> Result<Outcome, Error> {
    let p = to_polynomial(expr)?;
    let row = |condition, label, residual: QPolynomial| SymbolicRow {
        condition,
        label,
        residual_norm: residual.max_abs_coeff(),
        residual,
    };
    let rows = match a.condition {
        CheckCondition::Fueter => {
            let side: Side = a.side.into();
            vec![row(Condition::Fueter, side.name(), fueter_residual(&p, side))]
        }
        CheckCondition::Naive => vec![row(Condition::Naive, "all", naive_cr_residual(&p))],
        CheckCondition::ComplexCr => vec![row(Condition::ComplexCr, "i", complex_cr_residual(&p.restrict_zero(&[2, 3]))?)],
        CheckCondition::Directional => directional_cr_residuals(&p)
            .into_iter()
            .zip(["i", "j", "k"])
            .map(|(r, label)| row(Condition::Directional, label, r))
            .collect(),
        CheckCondition::LocalCr => unreachable!("numeric condition"),
    };
    let summary = summarize(rows.iter().map(|r| r.residual_norm), 0, 0, config.tol);
    let code = if summary.pass { EXIT_PASS } else { EXIT_FAIL };
    let report = CheckReport { config, rows, issues: Vec::new(), summary };
    let out = match a.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => symbolic_csv(&report),
    };
    Ok(Outcome::ok(code, out))
}

fn csv_summary(out: &mut String, issues: &[PointIssue], s: &Summary) {
    for i in issues {
        let _ = writeln!(out, "# {} point {}: {}", i.kind, i.index, i.message);
    }
    let _ = writeln!(
        out,
        "# max_residual={} pass={} evaluated={} skipped={} errors={}",
        s.max_residual, s.pass, s.evaluated, s.skipped, s.errors
    );
}

fn numeric_csv(report: &CheckReport<PointRow>, dim: usize) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string(), "condition".to_string()];
    header.extend((0..dim).map(|n| format!("p{n}")));
    header.extend((0..dim).map(|n| format!("r{n}")));
    header.extend(["residual_norm".to_string(), "h".to_string()]);
    w.write_record(&header).expect("in-memory write");
    for row in &report.rows {
        let r = &row.report;
        let mut rec = vec![row.index.to_string(), r.condition.as_str().to_string()];
        rec.extend(r.point.to_vec().iter().map(f64::to_string));
        rec.extend(r.residual.to_vec().iter().map(f64::to_string));
        rec.extend([r.residual_norm.to_string(), r.h.to_string()]);
        w.write_record(&rec).expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    csv_summary(&mut out, &report.issues, &report.summary);
    out
}

fn symbolic_csv(report: &CheckReport<SymbolicRow>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["condition", "label", "residual_norm", "residual"]).expect("in-memory write");
    for r in &report.rows {
        w.write_record([
            r.condition.as_str(),
            r.label,
            &r.residual_norm.to_string(),
            &r.residual.to_string(),
        ])
        .expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    csv_summary(&mut out, &report.issues, &report.summary);
    out
}

/// A nonzero entry of a parameter vector.
#[derive(Debug, Clone, Serialize)]
pub struct Labeled {
    pub slot: String,
    pub value: f64,
}

fn labeled(space: CoefficientSpace, v: &[f64]) -> Vec<Labeled> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > 1e-12)
        .map(|(n, &value)| Labeled { slot: space.slot_label(n).to_string(), value })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub name: &'static str,
    pub max_row_residual: f64,
    pub in_solution_set: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub space: CoefficientSpace,
    pub orders: Vec<u32>,
    pub equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub dimension: usize,
    pub consistent: bool,
    pub unique: bool,
    pub particular: Option<Vec<Labeled>>,
    pub nullspace_basis: Vec<Vec<Labeled>>,
    pub candidates: Vec<Candidate>,
}

/// Builds and solves the system, and tests the known candidates against it.
pub fn solve_global_report(space: CoefficientSpace, orders: &[u32]) -> Result<SolveReport, Error> {
    let system = build_system(orders, space)?;
    let sol = solve(&system);
    let mut candidates = vec![("identity", DerivativeAnsatz::identity(space))];
    if space == CoefficientSpace::Barred {
        candidates.push(("barred-quadratic", DerivativeAnsatz::barred_quadratic_solution()));
    }
    let candidates = candidates
        .into_iter()
        .map(|(name, ansatz)| {
            let v = ansatz.to_vector();
            Candidate {
                name,
                max_row_residual: system.max_residual(&v),
                in_solution_set: sol.contains(&v, 1e-10),
            }
        })
        .collect();
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    Ok(SolveReport {
        space,
        orders,
        equations: system.rows.len(),
        unknowns: system.unknown_dim,
        rank: sol.rank,
        dimension: sol.dimension(),
        consistent: sol.is_consistent(),
        unique: sol.is_unique(),
        particular: sol.particular.as_deref().map(|p| labeled(space, p)),
        nullspace_basis: sol.nullspace_basis.iter().map(|b| labeled(space, b)).collect(),
        candidates,
    })
}

fn cmd_solve_global(a: &SolveArgs) -> Outcome {
    let report = match solve_global_report(a.space.into(), &a.orders) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let code = if report.consistent { EXIT_PASS } else { EXIT_FAIL };
    let out = match a.format {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Text => solve_text(&report),
    };
    Outcome::ok(code, out)
}

fn format_labeled(v: &[Labeled]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|l| format!("{}={}", l.slot, l.value)).collect::<Vec<_>>().join(", ")
}

fn solve_text(r: &SolveReport) -> String {
    let mut s = String::new();
    let orders: Vec<String> = r.orders.iter().map(u32::to_string).collect();
    let space = match r.space {
        CoefficientSpace::Plain => "plain",
        CoefficientSpace::Barred => "barred",
    };
    let _ = writeln!(s, "space: {space}");
    let _ = writeln!(s, "orders: {}", orders.join(","));
    let _ = writeln!(s, "equations: {}", r.equations);
    let _ = writeln!(s, "unknowns: {}", r.unknowns);
    let _ = writeln!(s, "rank: {}", r.rank);
    let _ = writeln!(s, "solution dimension: {}", r.dimension);
    let _ = writeln!(s, "consistent: {}", r.consistent);
    let _ = writeln!(s, "unique: {}", r.unique);
    match &r.particular {
        Some(p) => {
            let _ = writeln!(s, "particular: {}", format_labeled(p));
        }
        None => {
            let _ = writeln!(s, "particular: none");
        }
    }
    let _ = writeln!(s, "nullspace basis:");
    for (n, b) in r.nullspace_basis.iter().enumerate() {
        let _ = writeln!(s, "  v{}: {}", n + 1, format_labeled(b));
    }
    for c in &r.candidates {
        let _ = writeln!(
            s,
            "candidate {}: in solution set = {} (max row residual {:e})",
            c.name, c.in_solution_set, c.max_row_residual
        );
    }
    s
}

#[derive(Debug, Clone, Serialize)]
struct Table {
    table: TableKind,
    labels: Vec<String>,
    entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
struct ProjectorEntry {
    name: String,
    formula: String,
    coeffs: BarredOperator,
    matrix: RealMatrix4,
}

/// Names a signed basis element, e.g. `-k` for `-1` at index 3.
fn signed_unit(coords: &[f64], names: &[String]) -> String {
    let (n, x) = coords
        .iter()
        .enumerate()
        .find(|(_, x)| **x != 0.0)
        .expect("products of basis units are nonzero");
    format!("{}{}", if *x < 0.0 { "-" } else { "" }, names[n])
}

fn quaternion_names() -> Vec<String> {
    UNITS.iter().map(|s| s.to_string()).collect()
}

fn qmul_table() -> Table {
    let labels = quaternion_names();
    let entries = Quaternion::BASIS
        .iter()
        .map(|&a| Quaternion::BASIS.iter().map(|&b| signed_unit(&(a * b).to_array(), &labels)).collect())
        .collect();
    Table { table: TableKind::Qmul, labels, entries }
}

fn omul_table() -> Table {
    let labels: Vec<String> =
        std::iter::once("1".to_string()).chain((1..8).map(|n| format!("e{n}"))).collect();
    let entries = (0..8)
        .map(|a| (0..8).map(|b| signed_unit(&(Octonion::unit(a) * Octonion::unit(b)).0, &labels)).collect())
        .collect();
    Table { table: TableKind::Omul, labels, entries }
}

fn barred_basis() -> Vec<(String, BarredOperator)> {
    let mut out = Vec::new();
    for (a, &left) in Quaternion::BASIS.iter().enumerate() {
        for (b, &right) in Quaternion::BASIS.iter().enumerate() {
            out.push((format!("{}|{}", UNITS[a], UNITS[b]), BarredOperator::sandwich(left, right)));
        }
    }
    out
}

fn barred_compose_table() -> Table {
    let basis = barred_basis();
    let names = quaternion_names();
    let entries = basis
        .iter()
        .map(|(_, x)| {
            basis
                .iter()
                .map(|(_, y)| {
                    let c = x.compose(y);
                    let (m, left) = c
                        .coeffs
                        .iter()
                        .enumerate()
                        .find(|(_, q)| **q != Quaternion::ZERO)
                        .expect("compositions of basis operators are nonzero");
                    format!("{}|{}", signed_unit(&left.to_array(), &names), UNITS[m])
                })
                .collect()
        })
        .collect();
    Table { table: TableKind::BarredCompose, labels: basis.into_iter().map(|(n, _)| n).collect(), entries }
}

/// `4 P` written as a signed sum of `left|right` terms, over 4.
fn projector_formula(p: &BarredOperator) -> String {
    let mut terms = String::new();
    for (m, q) in p.coeffs.iter().enumerate() {
        for (l, x) in q.to_array().into_iter().enumerate() {
            let c = 4.0 * x;
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { " - " } else if terms.is_empty() { "" } else { " + " };
            let sign = if terms.is_empty() && c < 0.0 { "-" } else { sign };
            let mag = if (c.abs() - 1.0).abs() < 1e-15 { String::new() } else { format!("{}", c.abs()) };
            let _ = write!(terms, "{sign}{mag}{}|{}", UNITS[l], UNITS[m]);
        }
    }
    format!("({terms})/4")
}

fn projector_entries() -> Vec<ProjectorEntry> {
    Axis::ALL
        .iter()
        .map(|&axis| {
            let p = BarredOperator::projector(axis);
            ProjectorEntry {
                name: format!("P_{}", ["r", "i", "j", "k"][axis.index()]),
                formula: projector_formula(&p),
                matrix: p.to_matrix(),
                coeffs: p,
            }
        })
        .collect()
}

fn table_text(t: &Table) -> String {
    let width = t
        .labels
        .iter()
        .chain(t.entries.iter().flatten())
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let mut s = String::new();
    let _ = write!(s, "{:>width$} |", "");
    for l in &t.labels {
        let _ = write!(s, " {l:>width$}");
    }
    s.push('\n');
    let _ = writeln!(s, "{}", "-".repeat((width + 1) * (t.labels.len() + 1) + 1));
    for (label, row) in t.labels.iter().zip(&t.entries) {
        let _ = write!(s, "{label:>width$} |");
        for e in row {
            let _ = write!(s, " {e:>width$}");
        }
        s.push('\n');
    }
    s
}

fn cmd_tables(a: &TablesArgs) -> Outcome {
    let out = match a.which {
        TableKind::Projectors => {
            let entries = projector_entries();
            match a.format {
                ReportFormat::Json => to_json(&entries),
                ReportFormat::Text => {
                    let mut s = String::new();
                    for e in &entries {
                        let _ = writeln!(s, "{} = {}", e.name, e.formula);
                        for row in e.matrix.0 {
                            let cells: Vec<String> = row.iter().map(|x| format!("{x:>5}")).collect();
                            let _ = writeln!(s, "    [{}]", cells.join(" "));
                        }
                    }
                    s
                }
            }
        }
        kind => {
            let table = match kind {
                TableKind::Qmul => qmul_table(),
                TableKind::Omul => omul_table(),
                _ => barred_compose_table(),
            };
            match a.format {
                ReportFormat::Json => to_json(&table),
                ReportFormat::Text => table_text(&table),
            }
        }
    };
    Outcome::ok(EXIT_PASS, out)
}
