use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delay_logistic_core::discretization::scheme_stability;
use delay_logistic_core::sweep::{self, DEFAULT_TOLERANCE};
use delay_logistic_core::{
    char_poly, jury_conditions, jury_verdict, trivial_stability_range, BoundaryTable, DelayParams,
    FixedPoint, JuryTable, Method, Polynomial, Scheme, SchemeParams, StabilityVerdict, StateVector,
};
use serde::Serialize;

use crate::formats::{
    write_boundary_csv, write_trajectory_csv, BoundaryJson, BoundaryRow, ConditionJson,
    TrajectoryJson, VerdictJson,
};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Delays shown by the `tables` report.
const TABLE_TAUS: std::ops::RangeInclusive<usize> = 0..=5;

#[derive(Debug, Parser)]
#[command(
    name = "delaylog",
    version,
    about = "Stability analysis of the delayed logistic map"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the delayed logistic map.
    Simulate(SimulateArgs),
    /// Stability of one fixed point at given r and tau.
    Stability(StabilityArgs),
    /// Stability boundary f(tau) for tau = 0..=tau-max.
    Boundary(BoundaryArgs),
    /// Stability ranges of both fixed points for tau = 0..=5.
    Tables(TablesArgs),
    /// Jury table, conditions and verdict for an arbitrary polynomial.
    Jury(JuryArgs),
    /// Fixed-point stability of a one-step logistic ODE discretization.
    Discretize(DiscretizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, value_parser = finite_f64)]
    pub r: f64,
    #[arg(long = "K", visible_alias = "k", value_parser = finite_f64)]
    pub capacity: f64,
    #[arg(long)]
    pub tau: usize,
    /// Constant initial history.
    #[arg(long, value_parser = finite_f64, required_unless_present = "history")]
    pub x0: Option<f64>,
    /// Explicit initial history "v0,v1,...", oldest first, tau+1 entries.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x0")]
    pub history: Option<String>,
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointArg {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Jury,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Jury => Method::Jury,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct StabilityArgs {
    #[arg(long)]
    pub tau: usize,
    #[arg(long, value_parser = finite_f64)]
    pub r: f64,
    #[arg(long, value_enum)]
    pub point: PointArg,
    #[arg(long, value_enum, default_value = "jury")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub tau_max: usize,
    #[arg(long, value_parser = positive_f64, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "jury")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = positive_f64, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct JuryArgs {
    /// Coefficients "c0,c1,...,cm", highest power first.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Forward,
    Ratio,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DiscretizeArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long, value_parser = finite_f64)]
    pub r: f64,
    #[arg(long, value_parser = positive_f64)]
    pub h: f64,
    #[arg(long = "K", visible_alias = "k", value_parser = positive_f64)]
    pub capacity: f64,
    #[command(flatten)]
    pub output: Output,
}

fn finite_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x = finite_f64(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|item| finite_f64(item).map_err(CliError::Usage))
        .collect()
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`], writing to the given streams (unless `--out` is set).
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&config, stdout) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Diverged(step)) => {
            let _ = writeln!(stderr, "error: trajectory diverged at step {step}");
            EXIT_FAILURE
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

enum Outcome {
    Done,
    Diverged(i64),
}

fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Stability(a) => cmd_stability(a, stdout).map(|_| Outcome::Done),
        Command::Boundary(a) => cmd_boundary(a, stdout).map(|_| Outcome::Done),
        Command::Tables(a) => cmd_tables(a, stdout).map(|_| Outcome::Done),
        Command::Jury(a) => cmd_jury(a, stdout).map(|_| Outcome::Done),
        Command::Discretize(a) => cmd_discretize(a, stdout).map(|_| Outcome::Done),
    }
}

fn pick_format(
    out: &Output,
    default: Format,
    allowed: &[Format],
    cmd: &str,
) -> Result<Format, CliError> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "`{cmd}` does not support --format {}",
            f.to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default()
        )))
    }
}

fn emit(
    out: &Output,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn emit_json<T: Serialize>(
    out: &Output,
    stdout: &mut dyn Write,
    value: &T,
) -> Result<(), CliError> {
    emit(out, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn emit_text(out: &Output, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    emit(out, stdout, |w| {
        w.write_all(text.as_bytes())?;
        Ok(())
    })
}

fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let format = pick_format(
        &a.output,
        Format::Csv,
        &[Format::Csv, Format::Json],
        "simulate",
    )?;
    let params =
        DelayParams::new(a.r, a.capacity, a.tau).map_err(|e| CliError::Usage(e.to_string()))?;
    let init = match (&a.history, a.x0) {
        (Some(h), _) => {
            StateVector::new(&params, parse_list(h)?).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(x0)) => StateVector::constant(&params, x0),
        (None, None) => {
            return Err(CliError::Usage(
                "one of --x0 or --history is required".into(),
            ))
        }
    };
    let traj = delay_logistic_core::simulate(&params, &init, a.steps)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match format {
        Format::Csv => emit(&a.output, stdout, |w| write_trajectory_csv(&traj, w))?,
        _ => emit_json(&a.output, stdout, &TrajectoryJson::from(&traj))?,
    }
    Ok(match traj.diverged_at {
        Some(step) => Outcome::Diverged(step),
        None => Outcome::Done,
    })
}

#[derive(Debug, Serialize)]
struct RangeJson {
    lo: f64,
    hi: f64,
}

#[derive(Debug, Serialize)]
struct StabilityReport {
    tau: usize,
    r: f64,
    point: &'static str,
    verdict: VerdictJson,
    char_poly: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<Vec<ConditionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_moduli: Option<Vec<f64>>,
    stable_range: RangeJson,
}

fn cmd_stability(a: &StabilityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = pick_format(
        &a.output,
        Format::Json,
        &[Format::Json, Format::Text],
        "stability",
    )?;
    let params = DelayParams::new(a.r, 1.0, a.tau).map_err(|e| CliError::Usage(e.to_string()))?;
    let point = match a.point {
        PointArg::Trivial => FixedPoint::Trivial,
        PointArg::Nontrivial => FixedPoint::NonTrivial,
    };
    let p = char_poly(&params, point);
    let method = Method::from(a.method);
    let verdict = match method {
        Method::Oracle => delay_logistic_core::oracle_verdict(&p)?,
        _ => jury_verdict(&p),
    };
    let conditions = match method {
        Method::Jury => jury_conditions(&p)
            .ok()
            .map(|c| c.iter().map(ConditionJson::from).collect()),
        _ => None,
    };
    let root_moduli = if verdict.method == Method::Oracle {
        let mut m = p.roots()?.moduli();
        m.sort_by(|x, y| y.total_cmp(x));
        Some(m)
    } else {
        None
    };
    let stable_range = match point {
        FixedPoint::Trivial => {
            let r = trivial_stability_range(a.tau);
            RangeJson { lo: r.lo, hi: r.hi }
        }
        FixedPoint::NonTrivial => RangeJson {
            lo: 0.0,
            hi: sweep::critical_r_with(a.tau, DEFAULT_TOLERANCE, method)?.r_critical,
        },
    };
    let report = StabilityReport {
        tau: a.tau,
        r: a.r,
        point: point.as_str(),
        verdict: VerdictJson::from(&verdict),
        char_poly: p.coeffs().to_vec(),
        conditions,
        root_moduli,
        stable_range,
    };
    match format {
        Format::Text => emit_text(&a.output, stdout, &stability_text(&report, &verdict)),
        _ => emit_json(&a.output, stdout, &report),
    }
}

fn stability_text(rep: &StabilityReport, verdict: &StabilityVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tau = {}, r = {}, point = {}", rep.tau, rep.r, rep.point);
    let _ = writeln!(s, "characteristic polynomial: {:?}", rep.char_poly);
    if let Some(conds) = &rep.conditions {
        for c in conds {
            let _ = writeln!(
                s,
                "  {:>2}. {:<28} lhs = {:<24} rhs = {:<24} {}",
                c.index,
                c.description,
                c.lhs,
                c.rhs,
                if c.satisfied { "ok" } else { "FAIL" }
            );
        }
    }
    if let Some(m) = &rep.root_moduli {
        let _ = writeln!(s, "root moduli: {m:?}");
    }
    let _ = writeln!(
        s,
        "stable range: {} < r < {}",
        rep.stable_range.lo,
        fmt6(rep.stable_range.hi)
    );
    let _ = writeln!(s, "verdict: {} ({})", verdict.status, verdict.method);
    s
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn cmd_boundary(a: &BoundaryArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = pick_format(
        &a.output,
        Format::Json,
        &[Format::Json, Format::Csv, Format::Text],
        "boundary",
    )?;
    let table = sweep::boundary_table_with(a.tau_max, a.tol, a.method.into())?;
    match format {
        Format::Csv => emit(&a.output, stdout, |w| write_boundary_csv(&table, w)),
        Format::Text => emit_text(&a.output, stdout, &boundary_text(&table)),
        Format::Json => emit_json(&a.output, stdout, &BoundaryJson::from(&table)),
    }
}

fn boundary_text(table: &BoundaryTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<5} {:<12} {:<14} method", "tau", "f(tau)", "bracket");
    for p in &table.points {
        let _ = writeln!(
            s,
            "{:<5} {:<12} {:<14.3e} {}",
            p.tau,
            fmt6(p.r_critical),
            p.bracket_width,
            p.method
        );
    }
    let _ = writeln!(s, "monotone decreasing: {}", table.monotone_decreasing);
    s
}

#[derive(Debug, Serialize)]
struct TrivialRow {
    tau: usize,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Serialize)]
struct TablesJson {
    trivial: Vec<TrivialRow>,
    nontrivial: Vec<BoundaryRow>,
    monotone_decreasing: bool,
}

fn tuple_label(label: &str, tau: usize, entry: &str) -> String {
    format!("{label} = ({})", vec![entry; tau + 1].join(", "))
}

fn cmd_tables(a: &TablesArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = pick_format(
        &a.output,
        Format::Text,
        &[Format::Text, Format::Json],
        "tables",
    )?;
    let trivial: Vec<TrivialRow> = TABLE_TAUS
        .map(|tau| {
            let r = trivial_stability_range(tau);
            TrivialRow {
                tau,
                lo: r.lo,
                hi: r.hi,
            }
        })
        .collect();
    let table = sweep::boundary_table(*TABLE_TAUS.end(), a.tol)?;

    if format == Format::Json {
        let json = TablesJson {
            trivial,
            nontrivial: table.points.iter().map(BoundaryRow::from).collect(),
            monotone_decreasing: table.monotone_decreasing,
        };
        return emit_json(&a.output, stdout, &json);
    }

    let mut s = String::new();
    let _ = writeln!(s, "Trivial fixed point X1: stable range");
    let _ = writeln!(s, "{:<6} {:<28} range of stability", "tau", "fixed point");
    for row in &trivial {
        let _ = writeln!(
            s,
            "{:<6} {:<28} {} < r < {}",
            row.tau,
            tuple_label("X1", row.tau, "0"),
            row.lo,
            row.hi
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "Non-trivial fixed point X2: stable range");
    let _ = writeln!(s, "{:<6} {:<28} range of stability", "tau", "fixed point");
    for p in &table.points {
        let _ = writeln!(
            s,
            "{:<6} {:<28} 0 < r < {}",
            p.tau,
            tuple_label("X2", p.tau, "K"),
            fmt6(p.r_critical)
        );
    }
    let _ = writeln!(
        s,
        "f(tau) monotone decreasing: {}",
        table.monotone_decreasing
    );
    emit_text(&a.output, stdout, &s)
}

#[derive(Debug, Serialize)]
struct JuryReport {
    coeffs: Vec<f64>,
    normalized: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table_note: Option<String>,
    conditions: Vec<ConditionJson>,
    verdict: VerdictJson,
    spectral_radius: f64,
}

fn cmd_jury(a: &JuryArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = pick_format(
        &a.output,
        Format::Json,
        &[Format::Json, Format::Text],
        "jury",
    )?;
    let coeffs = parse_list(&a.coeffs)?;
    let p = Polynomial::new(coeffs.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let normalized = p
        .normalize_leading()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if normalized.degree() == 0 {
        return Err(CliError::Usage("need a polynomial of degree >= 1".into()));
    }
    let (table, table_note) = match JuryTable::build(&normalized) {
        Ok(t) => (Some(t.rows), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let conditions = jury_conditions(&normalized)
        .map(|c| c.iter().map(ConditionJson::from).collect())
        .unwrap_or_default();
    let verdict = jury_verdict(&normalized);
    let report = JuryReport {
        coeffs,
        normalized: normalized.coeffs().to_vec(),
        table,
        table_note,
        conditions,
        verdict: VerdictJson::from(&verdict),
        spectral_radius: normalized.spectral_radius()?,
    };
    if format == Format::Json {
        return emit_json(&a.output, stdout, &report);
    }
    let mut s = String::new();
    let _ = writeln!(s, "polynomial: {:?}", report.normalized);
    if let Some(rows) = &report.table {
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.6e}")).collect();
            let _ = writeln!(s, "  row {:>2}: {}", i + 1, cells.join("  "));
        }
    }
    if let Some(note) = &report.table_note {
        let _ = writeln!(s, "  table: {note}");
    }
    for c in &report.conditions {
        let _ = writeln!(
            s,
            "  {:>2}. {:<28} {}",
            c.index,
            c.description,
            if c.satisfied { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(s, "spectral radius: {}", report.spectral_radius);
    let _ = writeln!(s, "verdict: {} ({})", verdict.status, verdict.method);
    emit_text(&a.output, stdout, &s)
}

#[derive(Debug, Serialize)]
struct FixedPointJson {
    x: f64,
    derivative: f64,
    verdict: VerdictJson,
}

#[derive(Debug, Serialize)]
struct DiscretizeReport {
    scheme: &'static str,
    r: f64,
    h: f64,
    #[serde(rename = "K")]
    capacity: f64,
    fixed_points: Vec<FixedPointJson>,
}

fn cmd_discretize(a: &DiscretizeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let format = pick_format(
        &a.output,
        Format::Json,
        &[Format::Json, Format::Text],
        "discretize",
    )?;
    let scheme = match a.scheme {
        SchemeArg::Forward => Scheme::Forward,
        SchemeArg::Ratio => Scheme::Ratio,
    };
    let params = SchemeParams::new(a.r, a.capacity, a.h, scheme)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let s = scheme_stability(&params);
    let report = DiscretizeReport {
        scheme: scheme.as_str(),
        r: a.r,
        h: a.h,
        capacity: a.capacity,
        fixed_points: [s.trivial, s.nontrivial]
            .iter()
            .map(|fp| FixedPointJson {
                x: fp.x,
                derivative: fp.derivative,
                verdict: VerdictJson::from(&fp.verdict),
            })
            .collect(),
    };
    if format == Format::Json {
        return emit_json(&a.output, stdout, &report);
    }
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{} scheme, r = {}, h = {}, K = {}",
        report.scheme, a.r, a.h, a.capacity
    );
    for (fp, v) in report.fixed_points.iter().zip([s.trivial, s.nontrivial]) {
        let _ = writeln!(
            text,
            "  X = {:<12} f'(X) = {:<22} {}",
            fp.x, fp.derivative, v.verdict.status
        );
    }
    emit_text(&a.output, stdout, &text)
}
