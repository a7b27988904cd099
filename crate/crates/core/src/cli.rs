//! Batch front end behind the `fracstoch` binary.
//!
//! Every subcommand writes a CSV table to stdout (or `--out`). The first
//! line is `# ` followed by a JSON object with the command name, the crate
//! version, the seed and the fully merged configuration; the second line
//! holds the column names. Floats are written with 17 significant digits.
//!
//! Parameters come from flags or from a JSON file given with `--config`.
//! The file holds the same keys as the flags (with underscores), time-change
//! parameters nested under `"tc"`; flags override the file.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for numerical failures,
//! I/O errors and failed statistical checks.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::laplace::{
    h_x_series, invert_laplace, CatalogTransform, InversionConfig, InversionMethod, Part, PartTransform, TransformId,
};
use crate::levy::{sample_levy_path, LevySpec, TimeChangedLevy};
use crate::params::TimeChangeParams;
use crate::pde::{multiterm_expand, SolutionMode, SolutionQuery};
use crate::specfun::{ml_prabhakar_traced, wright_series, PrabhakarParams, WrightParams};
use crate::stats::{par_paths, McEstimate};
use crate::stoch::{
    sample_frak_v_path, sample_inverse_e, sample_inverse_e_composed, uniform_grid, Role, StreamFactory,
};
use crate::verify::{run_criterion, VerifyConfig, CRITERIA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const SEED_ENV: &str = "FRACSTOCH_SEED";

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    ChecksFailed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_INVALID,
            CliError::Lib(e) if e.is_validation() => EXIT_INVALID,
            _ => EXIT_NUMERICAL,
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Parser)]
#[command(name = "fracstoch", version, about = "Prabhakar operators, stable subordinators and time-changed Levy processes")]
struct Cli {
    /// JSON file with the subcommand parameters; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for stochastic commands (falls back to FRACSTOCH_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the Monte Carlo loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Prabhakar function E^xi_{alpha,eta}(x).
    #[command(after_help = "Columns: x, value, method, tolerance")]
    EvalMl(EvalMlArgs),
    /// Evaluate the Wright function W_{a,b}(x).
    #[command(after_help = "Columns: x, value, terms, method, tolerance")]
    EvalWright(EvalWrightArgs),
    /// Invert a catalog transform numerically.
    #[command(
        after_help = "Transforms: H_XS, H_TS, H_X_SERIES, E_DENS_TS, K_TS, G_FOURIER_LAPLACE, G_X_LAPLACE.\n\
                      Columns: t, value, method, order, secondary, disagreement, tolerance"
    )]
    Invert(InvertArgs),
    /// Sample paths of the subordinator or of a Levy process on a uniform grid.
    #[command(after_help = "Processes: frak-v, levy.\nColumns: path, component, time, value, method, tolerance")]
    SimulatePath(SimulatePathArgs),
    /// Draw first-passage times of the subordinator.
    #[command(
        after_help = "Methods: grid (first passage on the grid), composed (inverse stable of the inner passage).\n\
                      Columns: index, value, lower, upper, method, tolerance"
    )]
    SampleInverse(SampleInverseArgs),
    /// Compare the Monte Carlo characteristic function of a time-changed Levy
    /// process with the inverted Fourier-Laplace transform.
    #[command(after_help = "Columns: xi, part, estimate, stderr, reference, method, tolerance, passed")]
    McVerify(McVerifyArgs),
    /// Evaluate solutions of the fractional diffusion equation.
    #[command(
        after_help = "Modes: fourier-series (x is the frequency), wright-closed-form, density-by-inversion.\n\
                      Columns: mode, x, t, value, raw, method, tolerance"
    )]
    SolvePde(SolvePdeArgs),
    /// Expand the operator for integer delta into Caputo terms.
    #[command(after_help = "Columns: coefficient, order, method, tolerance")]
    Multiterm(MultitermArgs),
    /// Run the verification suite.
    #[command(after_help = "Columns: criterion, title, check, value, reference, metric, tolerance, passed")]
    VerifySuite(VerifySuiteArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::EvalMl(_) => "eval-ml",
            Command::EvalWright(_) => "eval-wright",
            Command::Invert(_) => "invert",
            Command::SimulatePath(_) => "simulate-path",
            Command::SampleInverse(_) => "sample-inverse",
            Command::McVerify(_) => "mc-verify",
            Command::SolvePde(_) => "solve-pde",
            Command::Multiterm(_) => "multiterm",
            Command::VerifySuite(_) => "verify-suite",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TcArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Rate lambda (default 1).
    #[arg(long)]
    lambda: Option<f64>,
    /// Diffusivity c (default 1).
    #[arg(long)]
    c: Option<f64>,
}

impl TcArgs {
    fn resolve(&self) -> Result<TimeChangeParams, CliError> {
        let tc = TimeChangeParams::new(req(self.gamma, "gamma")?, req(self.nu, "nu")?, req(self.delta, "delta")?);
        Ok(tc.with_lambda(self.lambda.unwrap_or(1.0)).with_c(self.c.unwrap_or(1.0)))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InversionArgs {
    /// talbot or gaver-stehfest.
    #[arg(long)]
    method: Option<String>,
    /// Talbot nodes or Gaver-Stehfest order.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Cross-check against the other inversion method (default true).
    #[arg(long)]
    cross_check: Option<bool>,
}

impl InversionArgs {
    fn resolve(&self) -> Result<InversionConfig, CliError> {
        let mut cfg = InversionConfig::default();
        if let Some(m) = &self.method {
            cfg.method = match m.as_str() {
                "talbot" | "fixed-talbot" => InversionMethod::FixedTalbot,
                "gaver-stehfest" | "stehfest" => InversionMethod::GaverStehfest,
                _ => return usage(format!("unknown inversion method '{m}'")),
            };
        }
        cfg.order = self.order;
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        if let Some(c) = self.cross_check {
            cfg.cross_check = c;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct EvalMlArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Default 1.
    #[arg(long)]
    eta: Option<f64>,
    /// Default 1.
    #[arg(long)]
    xi: Option<f64>,
    /// Arguments, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct EvalWrightArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct InvertArgs {
    /// Catalog name, e.g. H_TS.
    #[arg(long)]
    transform: Option<String>,
    #[command(flatten)]
    #[serde(default)]
    tc: TcArgs,
    /// First coordinate of the transform (x, z or Psi).
    #[arg(long)]
    first: Option<f64>,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(default)]
    inversion: InversionArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct SimulatePathArgs {
    /// frak-v or levy.
    #[arg(long)]
    process: Option<String>,
    #[command(flatten)]
    #[serde(default)]
    tc: TcArgs,
    /// Levy process as JSON, e.g. '{"kind":"poisson","rate":2}'.
    #[arg(long, value_parser = parse_levy)]
    levy: Option<LevySpec>,
    /// Final time.
    #[arg(long)]
    t: Option<f64>,
    /// Grid steps (default 1000).
    #[arg(long)]
    steps: Option<usize>,
    /// Number of paths (default 1).
    #[arg(long)]
    paths: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct SampleInverseArgs {
    #[command(flatten)]
    #[serde(default)]
    tc: TcArgs,
    #[arg(long)]
    t: Option<f64>,
    /// Number of draws.
    #[arg(long)]
    n: Option<usize>,
    /// First-passage grid step (default 1e-3).
    #[arg(long)]
    resolution: Option<f64>,
    /// grid or composed (default grid).
    #[arg(long)]
    method: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct McVerifyArgs {
    #[command(flatten)]
    #[serde(default)]
    tc: TcArgs,
    /// Levy process as JSON (default Brownian motion with c = 1).
    #[arg(long, value_parser = parse_levy)]
    levy: Option<LevySpec>,
    /// Time (default 1).
    #[arg(long)]
    t: Option<f64>,
    /// Frequencies along the first axis, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<f64>>,
    /// Paths (default 10000).
    #[arg(long)]
    n: Option<usize>,
    /// First-passage grid step (default 1e-3).
    #[arg(long)]
    resolution: Option<f64>,
    /// Absolute tolerance floor added to 3 standard errors (default 2e-3).
    #[arg(long)]
    floor: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct SolvePdeArgs {
    /// fourier-series, wright-closed-form or density-by-inversion.
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    #[serde(default)]
    tc: TcArgs,
    /// Positions (or frequencies), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(default)]
    inversion: InversionArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct MultitermArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Default 1.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
struct VerifySuiteArgs {
    /// fast or full (default fast).
    #[arg(long)]
    tier: Option<String>,
    /// Criteria to run, comma separated (default all).
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<usize>>,
}

fn parse_levy(s: &str) -> Result<LevySpec, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn req<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    match v {
        Some(v) => Ok(v),
        None => usage(format!("missing required parameter '{name}'")),
    }
}

/// Recursively overlays the non-null entries of `top` on `base`.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                if v.is_null() {
                    continue;
                }
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => overlay(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, t) => {
            if !t.is_null() {
                *b = t;
            }
        }
    }
}

fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.into_iter()
                .map(|(k, v)| (k, strip_nulls(v)))
                .filter(|(_, v)| !v.is_null() && v.as_object().is_none_or(|o| !o.is_empty()))
                .collect(),
        ),
        other => other,
    }
}

/// Merges the file section into the flag values and validates the result.
fn merge<T: Serialize + DeserializeOwned>(flags: &T, file: &Map<String, Value>) -> Result<(T, Value), CliError> {
    let mut merged = Value::Object(file.clone());
    let flag_value = serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))?;
    overlay(&mut merged, flag_value);
    let parsed: T = serde_json::from_value(strip_nulls(merged)).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let echo = serde_json::to_value(&parsed).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((parsed, strip_nulls(echo)))
}

enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

macro_rules! row {
    ($($v:expr),* $(,)?) => { vec![$(Cell::from($v)),*] };
}

/// Formats a float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::F(v) => format_float(*v),
        Cell::U(v) => v.to_string(),
        Cell::B(v) => v.to_string(),
        Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::S(s) => s.clone(),
    }
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &'static [&'static str]) -> Self {
        Table { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, meta: &Value) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {meta}");
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_cell).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

/// Result of a subcommand: its table, plus an error to report after the
/// table is written (failed statistical checks).
struct Outcome {
    table: Table,
    failure: Option<CliError>,
    notes: Vec<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None, notes: Vec::new() }
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64, CliError> {
    match seed {
        Some(s) => Ok(s),
        None => usage(format!("this command is stochastic and needs --seed (or {SEED_ENV})")),
    }
}

fn eval_ml(a: EvalMlArgs) -> Result<Outcome, CliError> {
    let p = PrabhakarParams::new(req(a.alpha, "alpha")?, a.eta.unwrap_or(1.0), a.xi.unwrap_or(1.0), 1.0);
    let mut table = Table::new(&["x", "value", "method", "tolerance"]);
    for x in req(a.x, "x")? {
        let (v, m) = ml_prabhakar_traced(&p, x)?;
        table.push(row![x, v, m.name(), m.tolerance()]);
    }
    Ok(table.into())
}

fn eval_wright(a: EvalWrightArgs) -> Result<Outcome, CliError> {
    let w = WrightParams { a: req(a.a, "a")?, b: req(a.b, "b")? };
    let mut table = Table::new(&["x", "value", "terms", "method", "tolerance"]);
    for x in req(a.x, "x")? {
        let s = wright_series(w, x)?;
        let tol = 1e-15 * s.cancellation().max(1.0);
        table.push(row![x, s.value, s.terms, "series", tol]);
    }
    Ok(table.into())
}

fn invert(a: InvertArgs) -> Result<Outcome, CliError> {
    let name = req(a.transform, "transform")?;
    let Some(id) = TransformId::parse(&name.replace('-', "_")) else {
        return usage(format!("unknown transform '{name}'"));
    };
    let tc = a.tc.resolve()?;
    let first = req(a.first, "first")?;
    let cfg = a.inversion.resolve()?;
    let mut table =
        Table::new(&["t", "value", "method", "order", "secondary", "disagreement", "tolerance"]);
    for t in req(a.t, "t")? {
        if id == TransformId::HXSeries {
            let v = h_x_series(&tc, first, t)?;
            table.push(row![t, v, "series", 0usize, f64::NAN, f64::NAN, 1e-15]);
            continue;
        }
        let f = CatalogTransform::new(id, tc, Complex64::new(first, 0.0))?;
        let inv = invert_laplace(&f, t, &cfg)?;
        table.push(row![
            t,
            inv.value,
            inv.method.name(),
            inv.order,
            inv.secondary.unwrap_or(f64::NAN),
            inv.disagreement.unwrap_or(f64::NAN),
            cfg.tolerance,
        ]);
    }
    Ok(table.into())
}

fn simulate_path(a: SimulatePathArgs, seed: u64) -> Result<Outcome, CliError> {
    let t = req(a.t, "t")?;
    let steps = a.steps.unwrap_or(1000);
    if steps == 0 {
        return usage("steps must be positive");
    }
    let grid = uniform_grid(t, steps);
    let n_paths = a.paths.unwrap_or(1);
    let streams = StreamFactory::new(seed);
    let mut table = Table::new(&["path", "component", "time", "value", "method", "tolerance"]);
    match a.process.as_deref().unwrap_or("frak-v") {
        "frak-v" => {
            let tc = a.tc.resolve()?;
            let paths = par_paths(n_paths, |i| sample_frak_v_path(&tc, &grid, &mut streams.stream(i, Role::Clock)));
            for (i, p) in paths.into_iter().enumerate() {
                let p = p?;
                for (time, v) in p.times.iter().zip(&p.values) {
                    table.push(row![i, 0usize, *time, *v, "exact-increments", 0.0]);
                }
            }
        }
        "levy" => {
            let spec = req(a.levy, "levy")?;
            let paths = par_paths(n_paths, |i| sample_levy_path(&spec, &grid, &mut streams.stream(i, Role::Levy)));
            for (i, p) in paths.into_iter().enumerate() {
                let p = p?;
                for (time, point) in p.times.iter().zip(&p.points) {
                    for (k, v) in point.iter().enumerate() {
                        table.push(row![i, k, *time, *v, "exact-increments", 0.0]);
                    }
                }
            }
        }
        other => return usage(format!("unknown process '{other}'")),
    }
    Ok(table.into())
}

fn sample_inverse(a: SampleInverseArgs, seed: u64) -> Result<Outcome, CliError> {
    let tc = a.tc.resolve()?;
    let t = req(a.t, "t")?;
    let n = req(a.n, "n")?;
    let res = a.resolution.unwrap_or(1e-3);
    let streams = StreamFactory::new(seed);
    let mut table = Table::new(&["index", "value", "lower", "upper", "method", "tolerance"]);
    match a.method.as_deref().unwrap_or("grid") {
        "grid" => {
            let draws = par_paths(n, |i| sample_inverse_e(&tc, t, res, &mut streams.stream(i, Role::Clock)));
            for (i, d) in draws.into_iter().enumerate() {
                let d = d?;
                table.push(row![i, d.value, d.lower, d.upper, "grid-first-passage", res]);
            }
        }
        "composed" => {
            let draws = par_paths(n, |i| sample_inverse_e_composed(&tc, t, res, &mut streams.stream(i, Role::Clock)));
            for (i, d) in draws.into_iter().enumerate() {
                table.push(row![i, d?, f64::NAN, f64::NAN, "composed", res]);
            }
        }
        other => return usage(format!("unknown sampling method '{other}'")),
    }
    Ok(table.into())
}

fn mc_verify(a: McVerifyArgs, seed: u64) -> Result<Outcome, CliError> {
    let tc = a.tc.resolve()?;
    let spec = a.levy.unwrap_or_else(|| LevySpec::brownian(1.0));
    let t = a.t.unwrap_or(1.0);
    let n = a.n.unwrap_or(10_000);
    let floor = a.floor.unwrap_or(2e-3);
    let dim = spec.dim();
    let process = TimeChangedLevy::new(spec.clone(), tc, vec![0.0; dim], a.resolution.unwrap_or(1e-3))?;
    let points = process.samples(t, n, seed)?;
    let cfg = InversionConfig::default();
    let mut table =
        Table::new(&["xi", "part", "estimate", "stderr", "reference", "method", "tolerance", "passed"]);
    let mut failed = 0;
    for xi in req(a.xi, "xi")? {
        let mut freq = vec![0.0; dim];
        freq[0] = xi;
        let f = CatalogTransform::new(TransformId::GFourierLaplace, tc, spec.psi(&freq))?;
        for part in [Part::Re, Part::Im] {
            let vals: Vec<f64> = points
                .iter()
                .map(|p| match part {
                    Part::Re => (xi * p[0]).cos(),
                    Part::Im => (xi * p[0]).sin(),
                })
                .collect();
            let est = McEstimate::from_samples(&vals);
            let inv = invert_laplace(&PartTransform::new(f, part), t, &cfg)?;
            let tol = (3.0 * est.stderr).max(floor);
            let passed = (est.mean - inv.value).abs() <= tol;
            failed += usize::from(!passed);
            let name = match part {
                Part::Re => "re",
                Part::Im => "im",
            };
            table.push(row![xi, name, est.mean, est.stderr, inv.value, inv.method.name(), tol, passed]);
        }
    }
    let failure = (failed > 0).then(|| CliError::ChecksFailed(format!("{failed} Monte Carlo check(s) failed")));
    Ok(Outcome { table, failure, notes: Vec::new() })
}

fn solve_pde(a: SolvePdeArgs) -> Result<Outcome, CliError> {
    let name = a.mode.unwrap_or_else(|| "density-by-inversion".into());
    let Some(mode) = SolutionMode::parse(&name) else {
        return usage(format!("unknown mode '{name}'"));
    };
    let tc = a.tc.resolve()?;
    let cfg = a.inversion.resolve()?;
    let xs = req(a.x, "x")?;
    let mut table = Table::new(&["mode", "x", "t", "value", "raw", "method", "tolerance"]);
    for t in req(a.t, "t")? {
        for &x in &xs {
            let v = SolutionQuery { mode, tc, point: (x, t) }.evaluate(&cfg)?;
            table.push(row![name.as_str(), x, t, v.value, v.raw, v.method, v.tolerance]);
        }
    }
    Ok(table.into())
}

fn multiterm(a: MultitermArgs) -> Result<Outcome, CliError> {
    let terms = multiterm_expand(req(a.n, "n")?, a.lambda.unwrap_or(1.0), req(a.gamma, "gamma")?, req(a.nu, "nu")?)?;
    let mut table = Table::new(&["coefficient", "order", "method", "tolerance"]);
    for term in terms {
        table.push(row![term.coefficient, term.order, "binomial-expansion", 0.0]);
    }
    Ok(table.into())
}

fn verify_suite(a: VerifySuiteArgs, seed: u64) -> Result<Outcome, CliError> {
    let cfg = match a.tier.as_deref().unwrap_or("fast") {
        "fast" => VerifyConfig::fast(seed),
        "full" => VerifyConfig::full(seed),
        other => return usage(format!("unknown tier '{other}'")),
    };
    let ids = a.criteria.unwrap_or_else(|| (1..=CRITERIA.len()).collect());
    if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CRITERIA.len()) {
        return usage(format!("no criterion {bad}"));
    }
    let mut table =
        Table::new(&["criterion", "title", "check", "value", "reference", "metric", "tolerance", "passed"]);
    let mut notes = Vec::new();
    let mut failed = 0;
    for id in ids {
        let r = run_criterion(id, &cfg);
        notes.push(r.summary());
        failed += usize::from(!r.passed());
        for c in &r.checks {
            table.push(row![id, r.title, c.label.as_str(), c.value, c.reference, c.metric, c.tolerance, c.passed]);
        }
    }
    let failure = (failed > 0).then(|| CliError::ChecksFailed(format!("{failed} criteria failed")));
    Ok(Outcome { table, failure, notes })
}

fn load_config(path: &Option<PathBuf>) -> Result<Map<String, Value>, CliError> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => usage("config file must hold a JSON object"),
        Err(e) => usage(format!("config file {}: {e}", path.display())),
    }
}

fn seed_from(flag: Option<u64>, file: Option<Value>) -> Result<Option<u64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    if let Some(v) = file {
        return match v.as_u64() {
            Some(s) => Ok(Some(s)),
            None => usage("config 'seed' must be a non-negative integer"),
        };
    }
    match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse() {
            Ok(v) => Ok(Some(v)),
            Err(_) => usage(format!("{SEED_ENV} must be a non-negative integer, got '{s}'")),
        },
        Err(_) => Ok(None),
    }
}

fn execute(cli: Cli, err: &mut dyn Write) -> Result<(String, Option<PathBuf>, Option<CliError>), CliError> {
    let mut file = load_config(&cli.config)?;
    let seed = seed_from(cli.seed, file.remove("seed"))?;
    let threads = match (cli.threads, file.remove("threads")) {
        (Some(n), _) => Some(n),
        (None, Some(v)) => match v.as_u64() {
            Some(n) => Some(n as usize),
            None => return usage("config 'threads' must be a positive integer"),
        },
        (None, None) => None,
    };
    let command = cli.command.name();
    let stochastic = matches!(command, "simulate-path" | "sample-inverse" | "mc-verify" | "verify-suite");
    let run = || -> Result<(Outcome, Value), CliError> {
        macro_rules! go {
            ($args:expr, $f:expr) => {{
                let (args, merged) = merge(&$args, &file)?;
                ($f(args)?, merged)
            }};
        }
        Ok(match cli.command {
            Command::EvalMl(a) => go!(a, eval_ml),
            Command::EvalWright(a) => go!(a, eval_wright),
            Command::Invert(a) => go!(a, invert),
            Command::SimulatePath(a) => go!(a, |a| simulate_path(a, need_seed(seed)?)),
            Command::SampleInverse(a) => go!(a, |a| sample_inverse(a, need_seed(seed)?)),
            Command::McVerify(a) => go!(a, |a| mc_verify(a, need_seed(seed)?)),
            Command::SolvePde(a) => go!(a, solve_pde),
            Command::Multiterm(a) => go!(a, multiterm),
            Command::VerifySuite(a) => go!(a, |a| verify_suite(a, need_seed(seed)?)),
        })
    };
    let (outcome, merged) = match threads {
        Some(0) => return usage("threads must be positive"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            pool.install(run)?
        }
        None => run()?,
    };
    for note in &outcome.notes {
        writeln!(err, "{note}")?;
    }
    let meta = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": if stochastic { json!(seed) } else { Value::Null },
        "config": merged,
    });
    Ok((outcome.table.render(&meta), cli.out, outcome.failure))
}

/// Runs the command line `argv` (including the program name), writing the
/// table to `out` unless `--out` is given and diagnostics to `err`.
/// Returns the process exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = execute(cli, err).and_then(|(text, path, failure)| {
        match path {
            Some(p) => std::fs::write(p, text.as_bytes())?,
            None => out.write_all(text.as_bytes())?,
        }
        match failure {
            Some(f) => Err(f),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs `argv` against the process stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fracstoch").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn overlay_prefers_top_and_skips_nulls() {
        let mut base = json!({"a": 1, "tc": {"gamma": 0.5, "nu": 0.2}});
        overlay(&mut base, json!({"a": null, "tc": {"nu": 0.3, "delta": null}, "b": 2}));
        assert_eq!(base, json!({"a": 1, "tc": {"gamma": 0.5, "nu": 0.3}, "b": 2}));
    }

    #[test]
    fn float_format_round_trips() {
        for v in [std::f64::consts::E, 0.1, -1e-300, 7.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn missing_parameter_is_a_usage_error() {
        let (code, _, err) = call(&["eval-ml", "--alpha", "1"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("'x'"));
    }
}
