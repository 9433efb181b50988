//! Command-line front end: sweeps, verification suites and table export.
//!
//! Exit codes: 0 success, 1 verification failure or numerical failure,
//! 2 usage or configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::commutators::{
    adjoint2, assembled_c_out, assembled_cross, bosonize, commutator_set_from, min_eigenvalue, mul2, unitarity_defect,
};
use crate::error::{Error, Result};
use crate::fresnel::scatter_set;
use crate::green::{Green, OuterTreatment, QuadratureSpec};
use crate::io::IoMatrix;
use crate::kernels::{kernel_radial, KernelKind, KernelOptions, Window};
use crate::kinematics::{ModeContext, Polarization, Side};
use crate::sampler::{sample_emission, with_workers, SamplePlan};
use crate::stack::{load_stack_file, Stack};
use crate::thermal::{bose, emission_w, kirchhoff};
use crate::tolerances as tol;
use crate::units::{parse_omega_grid, parse_values, KGrid};

/// Version of the table layouts written by every subcommand.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "iorel", version, about = "Input-output relations of planar multilayers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Stack definition (TOML)
    #[arg(long, global = true)]
    pub stack: Option<PathBuf>,
    /// Frequency grid, e.g. `1e15:3e15:11`, `0.8,1.2@eV`, `1:2:5@um`
    #[arg(long, global = true, default_value = "2e15")]
    pub omega: String,
    /// In-plane wavenumber grid, e.g. `0:0.99:100@k0`, `0,1e6`, `0:60:7@deg`
    #[arg(long, global = true, default_value = "0@k0")]
    pub k: String,
    #[arg(long, global = true, value_enum, default_value_t = PolArg::Both)]
    pub pol: PolArg,
    /// Temperature in kelvin
    #[arg(long, global = true, default_value_t = 300.0)]
    pub temp: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolArg {
    S,
    P,
    Both,
}

impl PolArg {
    fn list(self) -> Vec<Polarization> {
        match self {
            PolArg::S => vec![Polarization::S],
            PolArg::P => vec![Polarization::P],
            PolArg::Both => Polarization::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Commutators,
    Unitarity,
    Kirchhoff,
    Green,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "n")]
    N,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Zero => Side::Zero,
            SideArg::N => Side::N,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized reflection, transmission, Fabry-Perot denominators and noise couplings
    Coeffs,
    /// Run an identity suite over the grid
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Simpson intervals per layer for the green suite
        #[arg(long, default_value_t = 200)]
        nodes: usize,
    },
    /// Thermal emission on both sides
    Thermal,
    /// Monte Carlo estimate of the emission
    Sample {
        #[arg(long, default_value_t = 10_000)]
        realizations: usize,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Zero)]
        side: SideArg,
    },
    /// Gaussian-windowed coordinate-space kernel along rho = x
    Kernels {
        /// r0n, rn0, t0n, tn0, phi0+:J, phi0-:J, phin+:J, phin-:J
        #[arg(long)]
        kind: String,
        /// Window scale, same syntax as --k (single value)
        #[arg(long, default_value = "0.25@k0")]
        kw: String,
        /// Radial grid in metres, or with `@um` / `@nm`
        #[arg(long, default_value = "0:5:26@um")]
        rho: String,
    },
    /// Integral identity of the Green kernel at one pair of points
    GreenCheck {
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0)]
        jp: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        zp: f64,
        #[arg(long, default_value_t = 200)]
        nodes: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub schema: String,
    pub version: u32,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(schema: &str, columns: Vec<String>) -> Self {
        Table {
            schema: schema.to_string(),
            version: SCHEMA_VERSION,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "# iorel-schema {} v{}", self.schema, self.version)?;
                let mut w = csv::Writer::from_writer(out);
                let io_err = |e: csv::Error| match e.into_kind() {
                    csv::ErrorKind::Io(e) => Error::Io(e),
                    other => Error::Io(std::io::Error::other(format!("{other:?}"))),
                };
                w.write_record(&self.columns).map_err(io_err)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::render)).map_err(io_err)?;
                }
                w.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self).map_err(|e| Error::Io(e.into()))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn complex_cols(out: &mut Vec<String>, name: &str) {
    out.push(format!("{name}_re"));
    out.push(format!("{name}_im"));
}

fn push_c(row: &mut Vec<Cell>, z: num_complex::Complex64) {
    row.push(z.re.into());
    row.push(z.im.into());
}

/// One (omega, k, q) grid point.
#[derive(Debug, Clone, Copy)]
struct Point {
    omega: f64,
    k: f64,
    q: Polarization,
}

struct Sweep {
    stack: Stack,
    points: Vec<Point>,
}

fn sweep(g: &Global) -> Result<Sweep> {
    let path = g
        .stack
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--stack <file> is required".into()))?;
    let stack = load_stack_file(path)?;
    let omegas = parse_omega_grid(&g.omega)?;
    let kgrid: KGrid = g.k.parse()?;
    if !(g.temp >= 0.0) || !g.temp.is_finite() {
        return Err(Error::InvalidArgument(format!("temperature must be >= 0 K, got {}", g.temp)));
    }
    let mut points = Vec::new();
    for &omega in &omegas {
        for k in kgrid.resolve(&stack, omega)? {
            for q in g.pol.list() {
                points.push(Point { omega, k, q });
            }
        }
    }
    Ok(Sweep { stack, points })
}

/// Evaluate `f` on every point in parallel; rows come back in grid order.
fn map_points<T: Send>(points: &[Point], f: impl Fn(&Point) -> T + Sync + Send) -> Vec<T> {
    with_workers(|| points.par_iter().map(&f).collect())
}

fn point_cells(p: &Point) -> Vec<Cell> {
    vec![p.omega.into(), p.k.into(), p.q.to_string().into()]
}

fn cmd_coeffs(g: &Global) -> Result<Table> {
    let sw = sweep(g)?;
    let n = sw.stack.n();
    let mut columns = cols(&["omega", "k", "pol"]);
    for name in ["r0n", "t0n", "rn0", "tn0"] {
        complex_cols(&mut columns, name);
    }
    for j in 1..n {
        for name in ["d", "phi0p", "phi0m", "phinp", "phinm"] {
            complex_cols(&mut columns, &format!("{name}_{j}"));
        }
    }
    let mut table = Table::new("coeffs", columns);
    let rows = map_points(&sw.points, |p| -> Result<Vec<Cell>> {
        let ctx = ModeContext::new(&sw.stack, p.omega, p.k)?;
        let ss = scatter_set(&ctx, p.q)?;
        let io = IoMatrix::from_scatter(&ss);
        let mut row = point_cells(p);
        for z in [ss.r0n, ss.t0n, ss.rn0, ss.tn0] {
            push_c(&mut row, z);
        }
        for ph in &io.phi {
            push_c(&mut row, ss.regions[ph.j].d_fp);
            for z in [ph.zero[0], ph.zero[1], ph.n[0], ph.n[1]] {
                push_c(&mut row, z);
            }
        }
        Ok(row)
    });
    for r in rows {
        table.rows.push(r?);
    }
    Ok(table)
}

fn cmd_thermal(g: &Global) -> Result<Table> {
    let sw = sweep(g)?;
    let mut table = Table::new("thermal", cols(&["omega", "k", "pol", "temperature", "occupation", "w0", "wn"]));
    let rows = map_points(&sw.points, |p| -> Result<Vec<Cell>> {
        let ctx = ModeContext::new(&sw.stack, p.omega, p.k)?;
        let mut row = point_cells(p);
        row.push(g.temp.into());
        row.push(bose(p.omega, g.temp).into());
        row.push(emission_w(&ctx, p.q, g.temp, Side::Zero)?.into());
        row.push(emission_w(&ctx, p.q, g.temp, Side::N)?.into());
        Ok(row)
    });
    for r in rows {
        table.rows.push(r?);
    }
    Ok(table)
}

fn cmd_sample(g: &Global, realizations: usize, nodes: usize, side: Side) -> Result<Table> {
    let sw = sweep(g)?;
    let mut table = Table::new(
        "sample",
        cols(&["omega", "k", "pol", "side", "realizations", "nodes", "w_est", "std_error", "w_closed"]),
    );
    // realizations are parallel inside the sampler; grid points run in order
    for p in &sw.points {
        let plan = SamplePlan {
            omega: p.omega,
            k: p.k,
            q: p.q,
            temperature: g.temp,
            side,
            nodes_per_layer: nodes,
            realizations,
            seed: g.seed,
        };
        let est = sample_emission(&sw.stack, &plan)?;
        for w in &est.warnings {
            eprintln!("warning: {w}");
        }
        let ctx = ModeContext::new(&sw.stack, p.omega, p.k)?;
        let mut row = point_cells(p);
        row.push(side.to_string().into());
        row.push(Cell::Int(realizations as u64));
        row.push(Cell::Int(nodes as u64));
        row.push(est.mean.into());
        row.push(est.std_error.into());
        row.push(emission_w(&ctx, p.q, g.temp, side)?.into());
        table.rows.push(row);
    }
    Ok(table)
}

fn parse_length_grid(s: &str) -> Result<Vec<f64>> {
    let (v, scale) = match s.rsplit_once('@') {
        Some((v, "m")) => (v, 1.0),
        Some((v, "um")) => (v, 1e-6),
        Some((v, "nm")) => (v, 1e-9),
        Some((_, u)) => return Err(Error::InvalidArgument(format!("unknown length unit '{u}' (m, um, nm)"))),
        None => (s, 1.0),
    };
    parse_values(v).map(|xs| xs.into_iter().map(|x| x * scale).collect())
}

fn cmd_kernels(g: &Global, kind: &str, kw: &str, rho: &str) -> Result<Table> {
    let path = g
        .stack
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--stack <file> is required".into()))?;
    let stack = load_stack_file(path)?;
    let kind: KernelKind = kind.parse()?;
    let kw_grid: KGrid = kw.parse()?;
    if kw_grid.values.len() != 1 {
        return Err(Error::InvalidArgument("--kw takes a single value".into()));
    }
    let rho = parse_length_grid(rho)?;
    if rho.iter().any(|r| *r < 0.0) {
        return Err(Error::InvalidArgument("rho values must be non-negative".into()));
    }
    let mut columns = cols(&["omega", "rho", "kind"]);
    for a in ["x", "y", "z"] {
        for b in ["x", "y", "z"] {
            complex_cols(&mut columns, &format!("k{a}{b}"));
        }
    }
    let mut table = Table::new("kernels", columns);
    let pols = g.pol.list();
    for omega in parse_omega_grid(&g.omega)? {
        let k_w = kw_grid.resolve(&stack, omega)?[0];
        if !(k_w > 0.0) {
            return Err(Error::InvalidArgument("window scale must be positive".into()));
        }
        let field = kernel_radial(&stack, omega, kind, Window::Gaussian { k_w }, &rho, &pols, KernelOptions::default())?;
        for (i, &r) in rho.iter().enumerate() {
            let t = field.tensor(i, [1.0, 0.0]);
            let mut row: Vec<Cell> = vec![omega.into(), r.into(), kind.to_string().into()];
            for a in t.iter() {
                for z in a {
                    push_c(&mut row, *z);
                }
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}

struct Verdict {
    residual: f64,
    tolerance: f64,
    status: &'static str,
}

impl Verdict {
    fn check(residual: f64, tolerance: f64) -> Self {
        Verdict {
            residual,
            tolerance,
            status: if residual <= tolerance { "pass" } else { "fail" },
        }
    }

    fn skipped() -> Self {
        Verdict {
            residual: 0.0,
            tolerance: 0.0,
            status: "skip",
        }
    }
}

fn verify_point(stack: &Stack, p: &Point, suite: Suite, nodes: usize, temp: f64) -> Result<Verdict> {
    let ctx = ModeContext::new(stack, p.omega, p.k)?;
    let ss = scatter_set(&ctx, p.q)?;
    let io = IoMatrix::from_scatter(&ss);
    match suite {
        Suite::Commutators => {
            let cs = commutator_set_from(&ctx, &ss)?;
            let mut worst: f64 = 0.0;
            for (i, side) in [Side::Zero, Side::N].into_iter().enumerate() {
                let a = assembled_c_out(&cs, &io, side);
                worst = worst.max((a - cs.c_out[i]).norm() / cs.scale[i].max(a.norm()));
            }
            let x = assembled_cross(&cs, &io);
            worst = worst.max((x - cs.c_cross).norm() / (cs.scale[0] * cs.scale[1]).sqrt().max(x.norm()));
            for blk in &cs.layers {
                let tr = blk.c[0][0].re + blk.c[1][1].re;
                if tr > 0.0 {
                    if min_eigenvalue(&blk.c) < -tol::PSD_FLOOR * tr {
                        worst = f64::INFINITY;
                    }
                    let tt = mul2(&blk.tau, &adjoint2(&blk.tau));
                    for a in 0..2 {
                        for b in 0..2 {
                            worst = worst.max((tt[a][b] - blk.c[a][b]).norm() / tr);
                        }
                    }
                }
            }
            Ok(Verdict::check(worst, tol::COMMUTATOR_CLOSURE))
        }
        Suite::Unitarity => {
            let cs = commutator_set_from(&ctx, &ss)?;
            match bosonize(&cs, &io) {
                Ok(b) => {
                    let lossless = ctx.is_propagating_vacuum_like(0) && ctx.is_propagating_vacuum_like(ctx.n());
                    let t = if lossless { tol::UNITARITY_LOSSLESS } else { tol::UNITARITY_ABSORBING };
                    Ok(Verdict::check(unitarity_defect(&b, &cs), t))
                }
                Err(Error::NoBosonicInput { .. }) => Ok(Verdict::skipped()),
                Err(e) => Err(e),
            }
        }
        Suite::Kirchhoff => {
            let n = ctx.n();
            if !(ctx.is_propagating_vacuum_like(0) && ctx.is_propagating_vacuum_like(n)) {
                return Ok(Verdict::skipped());
            }
            let t = if temp > 0.0 { temp } else { 300.0 };
            Ok(Verdict::check(kirchhoff(&ctx, p.q, t)?.worst_balance(), tol::KIRCHHOFF))
        }
        Suite::Green => {
            let g = Green::new(&ctx)?;
            let spec = QuadratureSpec {
                nodes_per_layer: nodes,
                outer: OuterTreatment::Analytic,
            };
            let n = ctx.n();
            let mut worst: f64 = 0.0;
            let probes = [(0, 0, 0.0, 0.0), (0, n, -5e-8, 5e-8), (n, n, 0.0, 1e-7)];
            for (j, jp, z, zp) in probes {
                worst = worst.max(g.verify_identity(j, jp, z, zp, spec)?.residual);
            }
            Ok(Verdict::check(worst, tol::GREEN_IDENTITY))
        }
    }
}

/// Runs a suite; returns the table and whether every checked point passed.
fn cmd_verify(g: &Global, suite: Suite, nodes: usize) -> Result<(Table, bool)> {
    let sw = sweep(g)?;
    if suite == Suite::Green {
        for (j, name) in [(0, "medium0"), (sw.stack.n(), "mediumN")] {
            let eps = sw.stack.epsilon(j, sw.points.first().map_or(1.0, |p| p.omega))?;
            if !(eps.im > 0.0) {
                return Err(Error::NonAbsorbingOuter(name.into()));
            }
        }
    }
    let mut table = Table::new("verify", cols(&["omega", "k", "pol", "suite", "residual", "tolerance", "status"]));
    let suite_name = format!("{suite:?}").to_lowercase();
    let verdicts = map_points(&sw.points, |p| verify_point(&sw.stack, p, suite, nodes, g.temp));
    let mut ok = true;
    let mut worst: Option<(f64, usize)> = None;
    for (i, (p, v)) in sw.points.iter().zip(verdicts).enumerate() {
        let v = match v {
            Ok(v) => v,
            Err(e) if is_usage_error(&e) => return Err(e),
            Err(e) => {
                eprintln!("point {i}: {e}");
                Verdict::check(f64::INFINITY, 0.0)
            }
        };
        if v.status == "fail" {
            ok = false;
        }
        if v.status != "skip" && worst.map_or(true, |(w, _)| !(v.residual <= w)) {
            worst = Some((v.residual, i));
        }
        let mut row = point_cells(p);
        row.extend([
            suite_name.clone().into(),
            v.residual.into(),
            v.tolerance.into(),
            v.status.into(),
        ]);
        table.rows.push(row);
    }
    match worst {
        Some((w, i)) => {
            let p = &sw.points[i];
            eprintln!(
                "{suite_name}: {} | max residual {w:e} at omega={:e} k={:e} pol={}",
                if ok { "PASS" } else { "FAIL" },
                p.omega,
                p.k,
                p.q
            );
        }
        None => eprintln!("{suite_name}: no applicable grid points"),
    }
    Ok((table, ok))
}

fn cmd_green_check(g: &Global, j: usize, jp: usize, z: f64, zp: f64, nodes: usize) -> Result<(Table, bool)> {
    let sw = sweep(g)?;
    let mut table = Table::new("green-check", cols(&["omega", "k", "pol", "residual", "tolerance", "status"]));
    let mut ok = true;
    let mut seen = Vec::new();
    for p in &sw.points {
        // the identity involves the full kernel; one row per (omega, k)
        if seen.contains(&(p.omega.to_bits(), p.k.to_bits())) {
            continue;
        }
        seen.push((p.omega.to_bits(), p.k.to_bits()));
        let ctx = ModeContext::new(&sw.stack, p.omega, p.k)?;
        let res = Green::new(&ctx)?.verify_identity(
            j,
            jp,
            z,
            zp,
            QuadratureSpec {
                nodes_per_layer: nodes,
                outer: OuterTreatment::Analytic,
            },
        )?;
        let v = Verdict::check(res.residual, tol::GREEN_IDENTITY);
        ok &= v.status == "pass";
        table.rows.push(vec![
            p.omega.into(),
            p.k.into(),
            "both".into(),
            v.residual.into(),
            v.tolerance.into(),
            v.status.into(),
        ]);
    }
    Ok((table, ok))
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::Passivity { .. }
            | Error::Thickness { .. }
            | Error::OutOfTable { .. }
            | Error::Table(_)
            | Error::Region { .. }
            | Error::InvalidArgument(_)
            | Error::OutsideRegion { .. }
            | Error::NonAbsorbingOuter(_)
            | Error::Io(_)
    )
}

fn emit(g: &Global, table: &Table) -> Result<()> {
    match &g.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            table.write(g.format, &mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(g.format, &mut lock)?;
        }
    }
    Ok(())
}

/// Execute a parsed command line and map the outcome to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    let g = &cli.global;
    let outcome: Result<(Table, bool)> = match &cli.command {
        Command::Coeffs => cmd_coeffs(g).map(|t| (t, true)),
        Command::Thermal => cmd_thermal(g).map(|t| (t, true)),
        Command::Sample { realizations, nodes, side } => {
            cmd_sample(g, *realizations, *nodes, (*side).into()).map(|t| (t, true))
        }
        Command::Kernels { kind, kw, rho } => cmd_kernels(g, kind, kw, rho).map(|t| (t, true)),
        Command::Verify { suite, nodes } => cmd_verify(g, *suite, *nodes),
        Command::GreenCheck { j, jp, z, zp, nodes } => cmd_green_check(g, *j, *jp, *z, *zp, *nodes),
    };
    match outcome.and_then(|(t, ok)| emit(g, &t).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed downstream pipe (`| head`) is not a failure of the run
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}

/// Parse `std::env::args` and run.
pub fn main_entry() -> ExitCode {
    run(Cli::parse())
}
