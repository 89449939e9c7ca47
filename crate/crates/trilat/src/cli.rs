//! The `trilat` command line.
//!
//! Exit codes: 0 success, 1 comparison failed, 2 fit condition violated,
//! 3 numerical failure, 4 bad input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use trilat_core::closedform::ClosedFormKind;
use trilat_core::engine::{check_fit, hit_probabilities, theorem1};
use trilat_core::{ConvexBody, Error as CoreError, HitDistribution, TriangleLattice, Vec2, DEFAULT_ABS_TOL};

use crate::compare::Comparison;
use crate::polygon::read_vertices;
use crate::report::{
    compare_csv, compare_table, compute_csv, compute_table, simulate_csv, simulate_table, sweep_csv, sweep_table,
    CompareOutput, ComputeOutput, LatticeSpec, ShapeSpec, SimulateOutput, SweepOutput, SweepRow,
};
use crate::{parallel, AppError, ExitCode};

/// Fewest throws accepted by `compare`.
pub const MIN_COMPARE_THROWS: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(name = "trilat", version, about = "Hitting probabilities of convex bodies thrown onto a triangle lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic distribution (or simulation / comparison via --method).
    Compute(RunArgs),
    /// Monte Carlo throws only.
    Simulate(RunArgs),
    /// Analytic values against a simulation; fails if any |z| > 4.
    Compare(RunArgs),
    /// Analytic distribution over a range of one parameter, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Theorem1,
    Closed,
    Simulate,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ShapeArgs {
    /// Needle of length L.
    #[arg(long, value_name = "L")]
    pub needle: Option<f64>,
    /// Rectangle with sides G and H.
    #[arg(long, value_name = "G,H", value_parser = parse_pair)]
    pub rect: Option<(f64, f64)>,
    /// Ellipse with full axes G ≥ H.
    #[arg(long, value_name = "G,H", value_parser = parse_pair)]
    pub ellipse: Option<(f64, f64)>,
    /// Half disc of radius R.
    #[arg(long, value_name = "R")]
    pub halfdisc: Option<f64>,
    /// Disc of radius R.
    #[arg(long, value_name = "R")]
    pub disc: Option<f64>,
    /// Convex polygon, one "x y" vertex per line.
    #[arg(long, value_name = "FILE")]
    pub polygon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Lattice side lengths.
    #[arg(long, value_name = "A,B,C", value_parser = parse_triple)]
    pub lattice: (f64, f64, f64),
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Number of throws.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, env = "TRILAT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance of each quadrature.
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    pub tol: f64,
    /// Evaluate even when the body does not fit a cell (extrapolation).
    #[arg(long)]
    pub force: bool,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Output format; defaults to the --output extension, else a table.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Adds DELTA to the analytic p(1) and subtracts it from p(2) before
    /// comparing. Exercises the failure path of `compare`.
    #[arg(long, value_name = "DELTA", hide = true)]
    pub corrupt_analytic: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// ell, g, h, r, scale, a, b or c.
    #[arg(long)]
    pub param: String,
    #[arg(long, value_name = "LO..HI", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(long)]
    pub steps: usize,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers"));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let v = parse_floats(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse::<f64>().map_err(|e| format!("{hi:?}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err("need finite LO ≤ HI".into());
    }
    Ok((lo, hi))
}

impl ShapeArgs {
    fn spec(&self) -> Result<ShapeSpec, AppError> {
        Ok(if let Some(length) = self.needle {
            ShapeSpec::Needle { length }
        } else if let Some((g, h)) = self.rect {
            ShapeSpec::Rectangle { g, h }
        } else if let Some((g, h)) = self.ellipse {
            ShapeSpec::Ellipse { g, h }
        } else if let Some(r) = self.halfdisc {
            ShapeSpec::HalfDisc { r }
        } else if let Some(r) = self.disc {
            ShapeSpec::Disc { r }
        } else if let Some(path) = &self.polygon {
            ShapeSpec::Polygon { vertices: read_vertices(path)?.iter().map(|v| [v.x, v.y]).collect() }
        } else {
            return Err(AppError::Usage("no shape given".into()));
        })
    }
}

fn build_body(spec: &ShapeSpec) -> Result<ConvexBody, CoreError> {
    match spec {
        ShapeSpec::Needle { length } => ConvexBody::needle(*length),
        ShapeSpec::Rectangle { g, h } => ConvexBody::rectangle(*g, *h),
        ShapeSpec::Ellipse { g, h } => ConvexBody::ellipse(*g, *h),
        ShapeSpec::HalfDisc { r } => ConvexBody::half_disc(*r),
        ShapeSpec::Disc { r } => ConvexBody::disc(*r),
        ShapeSpec::Polygon { vertices } => {
            let pts: Vec<Vec2> = vertices.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
            ConvexBody::polygon(&pts)
        }
    }
}

/// Analytic distribution by the requested method.
pub fn analytic(
    method: MethodArg,
    body: &ConvexBody,
    lat: &TriangleLattice,
    tol: f64,
    force: bool,
) -> Result<HitDistribution, AppError> {
    let closed = ClosedFormKind::for_body(body, lat);
    Ok(match (method, closed) {
        (MethodArg::Theorem1, _) => theorem1(body, lat, tol, force)?,
        (MethodArg::Closed, None) => {
            return Err(AppError::Usage("no closed form for this body and lattice".into()));
        }
        (_, Some(kind)) => kind.evaluate(lat, tol, force)?,
        _ => hit_probabilities(body, lat, tol, force)?,
    })
}

fn resolve_format(format: Option<Format>, output: Option<&Path>) -> Format {
    format.unwrap_or_else(|| match output.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(_) => Format::Json,
        None => Format::Table,
    })
}

fn emit(args: &RunArgs, text: String) -> Result<(), AppError> {
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|source| AppError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render<T: serde::Serialize>(
    format: Format,
    value: &T,
    csv: impl FnOnce(&T) -> String,
    table: impl FnOnce(&T) -> String,
) -> Result<String, AppError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => csv(value),
        Format::Table => table(value),
    })
}

struct Setup {
    lat: TriangleLattice,
    body: ConvexBody,
    shape: ShapeSpec,
}

fn setup(args: &RunArgs) -> Result<Setup, AppError> {
    if !(args.tol > 0.0) {
        return Err(AppError::Usage("--tol must be positive".into()));
    }
    let (a, b, c) = args.lattice;
    let lat = TriangleLattice::from_sides(a, b, c)?;
    let shape = args.shape.spec()?;
    let body = build_body(&shape)?;
    let shape = ShapeSpec::from(&body);
    Ok(Setup { lat, body, shape })
}

fn warn_forced(d: &HitDistribution) {
    if d.forced {
        eprintln!(
            "warning: body violates the fit condition (margin {:e}); values are extrapolated, not a theorem guarantee",
            d.condition_margin
        );
    }
}

fn cmd_compute(args: &RunArgs) -> Result<ExitCode, AppError> {
    match args.method {
        MethodArg::Simulate => return cmd_simulate(args),
        MethodArg::Compare => return cmd_compare(args),
        _ => {}
    }
    let s = setup(args)?;
    let d = analytic(args.method, &s.body, &s.lat, args.tol, args.force)?;
    warn_forced(&d);
    let out = ComputeOutput {
        lattice: (&s.lat).into(),
        shape: s.shape,
        tol: args.tol,
        distribution: d,
        extrapolated: d.forced,
    };
    let format = resolve_format(args.format, args.output.as_deref());
    emit(args, render(format, &out, compute_csv, compute_table)?)?;
    Ok(ExitCode::Ok)
}

fn cmd_simulate(args: &RunArgs) -> Result<ExitCode, AppError> {
    let s = setup(args)?;
    let report = parallel::run_simulation(&s.body, &s.lat, args.n, args.seed)?;
    let out = SimulateOutput { lattice: (&s.lat).into(), shape: s.shape, report };
    let format = resolve_format(args.format, args.output.as_deref());
    emit(args, render(format, &out, simulate_csv, simulate_table)?)?;
    Ok(ExitCode::Ok)
}

fn cmd_compare(args: &RunArgs) -> Result<ExitCode, AppError> {
    if args.n < MIN_COMPARE_THROWS {
        return Err(AppError::Usage(format!("compare needs --n of at least {MIN_COMPARE_THROWS}")));
    }
    let s = setup(args)?;
    let method = match args.method {
        MethodArg::Theorem1 | MethodArg::Closed => args.method,
        _ => MethodArg::Auto,
    };
    let mut d = analytic(method, &s.body, &s.lat, args.tol, args.force)?;
    warn_forced(&d);
    if let Some(delta) = args.corrupt_analytic {
        d.p[0] += delta;
        d.p[1] -= delta;
    }
    let simulation = parallel::run_simulation(&s.body, &s.lat, args.n, args.seed)?;
    let comparison = Comparison::new(&d, &simulation);
    let passed = comparison.passed;
    let max_z = comparison.max_abs_z();
    let out = CompareOutput {
        lattice: (&s.lat).into(),
        shape: s.shape,
        tol: args.tol,
        analytic: d,
        simulation,
        comparison,
    };
    let format = resolve_format(args.format, args.output.as_deref());
    emit(args, render(format, &out, compare_csv, compare_table)?)?;
    if passed {
        Ok(ExitCode::Ok)
    } else {
        Err(AppError::CompareFailed { max_z })
    }
}

/// Lattice and body with `param` set to `value`.
fn with_param(
    param: &str,
    value: f64,
    lattice: (f64, f64, f64),
    shape: &ShapeSpec,
) -> Result<(TriangleLattice, ConvexBody), AppError> {
    let (mut a, mut b, mut c) = lattice;
    let mut shape = shape.clone();
    let mut scale = 1.0;
    let bad = || AppError::Usage(format!("parameter {param:?} does not apply to this shape"));
    match (param, &mut shape) {
        ("a", _) => a = value,
        ("b", _) => b = value,
        ("c", _) => c = value,
        ("scale", _) => scale = value,
        ("ell" | "length", ShapeSpec::Needle { length }) => *length = value,
        ("g", ShapeSpec::Rectangle { g, .. } | ShapeSpec::Ellipse { g, .. }) => *g = value,
        ("h", ShapeSpec::Rectangle { h, .. } | ShapeSpec::Ellipse { h, .. }) => *h = value,
        ("r", ShapeSpec::HalfDisc { r } | ShapeSpec::Disc { r }) => *r = value,
        _ => return Err(bad()),
    }
    let lat = TriangleLattice::from_sides(a, b, c)?;
    let mut body = build_body(&shape)?;
    if scale != 1.0 {
        body = body.scaled(scale)?;
    }
    Ok((lat, body))
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode, AppError> {
    let run = &args.run;
    if args.steps < 2 {
        return Err(AppError::Usage("--steps must be at least 2".into()));
    }
    if matches!(run.method, MethodArg::Simulate | MethodArg::Compare) {
        return Err(AppError::Usage("sweep supports --method auto, theorem1 or closed".into()));
    }
    let s = setup(run)?;
    let (lo, hi) = args.range;
    let mut rows = Vec::with_capacity(args.steps);
    for k in 0..args.steps {
        let value = if k + 1 == args.steps { hi } else { lo + (hi - lo) * k as f64 / (args.steps - 1) as f64 };
        let (lat, body) = with_param(&args.param, value, run.lattice, &s.shape)?;
        let row = match analytic(run.method, &body, &lat, run.tol, run.force) {
            Ok(d) => SweepRow { param: value, p: Some(d.p), expectation: Some(d.expectation), margin: d.condition_margin },
            Err(AppError::Core(CoreError::BodyTooLarge { margin })) => {
                SweepRow { param: value, p: None, expectation: None, margin }
            }
            Err(AppError::Core(CoreError::NeedleTooLong { .. })) => {
                SweepRow { param: value, p: None, expectation: None, margin: check_fit(&body, &lat).margin }
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let out = SweepOutput { param: args.param.clone(), lattice: LatticeSpec::from(&s.lat), shape: s.shape, rows };
    let format = match resolve_format(run.format, run.output.as_deref()) {
        Format::Table => Format::Csv,
        f => f,
    };
    emit(run, render(format, &out, |o| sweep_csv(&o.rows), sweep_table)?)?;
    Ok(ExitCode::Ok)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::BadInput as i32 } else { ExitCode::Ok as i32 };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => code as i32,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    }
}
