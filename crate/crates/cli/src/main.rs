//! `mgr`: solve two-medium Riemann problems, sample exact profiles, run the
//! cut-cell scheme and sweep EOS conditions.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use mgriemann::eos::{ConditionReport, Eos, EosError};
use mgriemann::flow1d::{run_simulation, FlowError, RunParams};
use mgriemann::problems::{
    builtin_problem, nitromethane, shock_metrics, shyue_jwl, tnt_jwl, water_polynomial, water_stiffened, ImpulseWindow,
    ProblemError, ProblemSpec,
};
use mgriemann::riemann::{sample_profile, FluidState, RiemannError, Side, SolverOptions, StarState};

#[derive(Parser)]
#[command(
    name = "mgr",
    version,
    about = "Two-medium Riemann solver for Mie-Grüneisen materials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the interface Riemann problem and report the star state.
    Solve(SolveArgs),
    /// Write the exact self-similar profile at a given time.
    Profile(ProfileArgs),
    /// Run the cut-cell scheme and write snapshots, gauges and a manifest.
    Run(RunArgs),
    /// Check the EOS conditions over a density grid.
    CheckEos(CheckEosArgs),
    /// Write a built-in problem as a JSON config.
    Export(ExportArgs),
}

#[derive(Args)]
struct Source {
    /// Built-in problem name.
    #[arg(long, conflicts_with = "config")]
    problem: Option<String>,
    /// JSON problem file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Outer Newton tolerance on the relative pressure change.
    #[arg(long)]
    tol: Option<f64>,
    /// RK4 sub-steps per rarefaction evaluation.
    #[arg(long)]
    substeps: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    solver: SolverArgs,
    /// Override the left state as `rho,u,p`.
    #[arg(long, allow_hyphen_values = true)]
    left: Option<String>,
    /// Override the right state as `rho,u,p`.
    #[arg(long, allow_hyphen_values = true)]
    right: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    solver: SolverArgs,
    /// Sample time, defaults to the problem end time.
    #[arg(long)]
    time: Option<f64>,
    /// Number of sample points.
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long, default_value_t = 0.4)]
    cfl: f64,
    /// Gauge positions `r1,r2,...`; defaults to the problem's gauges.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gauges: Option<Vec<f64>>,
    /// Extra snapshot times `t1,t2,...`; the end time is always written.
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<f64>,
    /// Override the problem end time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Integrate impulse over the positive phase only.
    #[arg(long)]
    positive_phase: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also print the manifest on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckEosArgs {
    /// Check the materials of one problem instead of the built-in EOS sets.
    #[command(flatten)]
    source: OptSource,
    /// Densities per EOS.
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Directory for `check_eos.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptSource {
    #[arg(long, conflicts_with = "config")]
    problem: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    problem: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(PathBuf, io::Error),
    Riemann(RiemannError),
    Eos(EosError),
    Flow(FlowError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(..) => 2,
            CliError::Eos(_) => 5,
            CliError::Riemann(e) => riemann_code(e),
            CliError::Flow(e) => match e {
                FlowError::Config(_) => 2,
                FlowError::InvalidState { .. } => 5,
                FlowError::Riemann { source, .. } => riemann_code(source),
                _ => 1,
            },
        }
    }
}

fn riemann_code(e: &RiemannError) -> u8 {
    match e {
        RiemannError::Vacuum { .. } => 3,
        RiemannError::NonConvergence { .. } => 4,
        _ => 5,
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Riemann(RiemannError::Vacuum { margin }) => {
                write!(f, "vacuum: the initial states generate a vacuum (margin {margin} m/s)")
            }
            CliError::Riemann(e) => write!(f, "{e}"),
            CliError::Eos(e) => write!(f, "EOS domain error: {e}"),
            CliError::Flow(e) => write!(f, "{e}"),
        }
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        match e {
            ProblemError::Eos(e) => CliError::Eos(e),
            ProblemError::Riemann(e) => CliError::Riemann(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<RiemannError> for CliError {
    fn from(e: RiemannError) -> Self {
        CliError::Riemann(e)
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.to_path_buf(), e)
}

fn load(problem: Option<&str>, config: Option<&Path>) -> Result<ProblemSpec, CliError> {
    match (problem, config) {
        (Some(name), None) => Ok(builtin_problem(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            ProblemSpec::from_json(&text).map_err(|e| match e {
                ProblemError::Json(j) => CliError::Config(format!("{}: {j}", path.display())),
                other => other.into(),
            })
        }
        _ => Err(CliError::Config("give exactly one of --problem or --config".into())),
    }
}

impl Source {
    fn load(&self) -> Result<ProblemSpec, CliError> {
        load(self.problem.as_deref(), self.config.as_deref())
    }
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions, CliError> {
        let mut o = SolverOptions::default();
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
            }
            o.tol = tol;
        }
        if let Some(n) = self.substeps {
            if n == 0 {
                return Err(CliError::Config("--substeps must be at least 1".into()));
            }
            o.substeps = n;
        }
        Ok(o)
    }
}

fn parse_state(text: &str) -> Result<FluidState, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("bad state `{text}`: {e}")))?;
    match v[..] {
        [rho, u, p] => Ok(FluidState::new(rho, u, p)),
        _ => Err(CliError::Config(format!("state `{text}` needs three values rho,u,p"))),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn wave_label(w: mgriemann::riemann::WaveType) -> &'static str {
    match w {
        mgriemann::riemann::WaveType::Shock => "shock",
        mgriemann::riemann::WaveType::Rarefaction => "rarefaction",
    }
}

fn star_json(star: &StarState) -> serde_json::Value {
    json!({
        "p_star": star.p_star,
        "u_star": star.u_star,
        "rho_star_l": star.rho_star_l,
        "rho_star_r": star.rho_star_r,
        "wave_l": wave_label(star.wave_l),
        "wave_r": wave_label(star.wave_r),
        "speeds_l": { "head": star.speeds_l.head, "tail": star.speeds_l.tail },
        "speeds_r": { "head": star.speeds_r.head, "tail": star.speeds_r.tail },
        "iterations": star.iterations,
        "residual": star.residual,
    })
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let mut spec = args.source.load()?;
    if let Some(s) = &args.left {
        spec.left.state = parse_state(s)?;
    }
    if let Some(s) = &args.right {
        spec.right.state = parse_state(s)?;
    }
    spec.validate()?;
    let star = spec.star_state(&args.solver.options()?)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&star_json(&star)).unwrap());
    } else {
        println!("problem     {}", spec.name);
        println!("p*          {:.10e} Pa", star.p_star);
        println!("u*          {:.10e} m/s", star.u_star);
        println!("rho*_l      {:.10e} kg/m^3", star.rho_star_l);
        println!("rho*_r      {:.10e} kg/m^3", star.rho_star_r);
        println!(
            "left wave   {} (head {:.6e}, tail {:.6e} m/s)",
            wave_label(star.wave_l),
            star.speeds_l.head,
            star.speeds_l.tail
        );
        println!(
            "right wave  {} (head {:.6e}, tail {:.6e} m/s)",
            wave_label(star.wave_r),
            star.speeds_r.head,
            star.speeds_r.tail
        );
        println!("iterations  {}", star.iterations);
        println!("residual    {:.3e} m/s", star.residual);
    }
    Ok(())
}

fn cmd_profile(args: &ProfileArgs) -> Result<(), CliError> {
    let spec = args.source.load()?;
    let star = spec.star_state(&args.solver.options()?)?;
    let t = args.time.unwrap_or(spec.t_end);
    let n = args.cells.unwrap_or(spec.cells);
    if n == 0 {
        return Err(CliError::Config("--cells must be positive".into()));
    }
    let points = sample_profile(
        &spec.left.eos,
        &spec.left.state,
        &spec.right.eos,
        &spec.right.state,
        &star,
        spec.interface,
        t,
        (spec.domain[0], spec.domain[1]),
        n,
    )?;
    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let path = args.out.join("profile.csv");
    let mut w = create(&path)?;
    let write = |w: &mut BufWriter<File>| -> io::Result<()> {
        writeln!(w, "x,rho,u,p,e,fluid")?;
        for pt in &points {
            let fluid = match pt.side {
                Side::Left => "minus",
                Side::Right => "plus",
            };
            let s = pt.state;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{fluid}",
                pt.x, s.rho, s.u, s.p, pt.e
            )?;
        }
        w.flush()
    };
    write(&mut w).map_err(io_err(&path))
}

#[derive(Serialize)]
struct SnapshotEntry {
    t: f64,
    file: String,
}

#[derive(Serialize)]
struct GaugeEntry {
    position: f64,
    file: String,
    peak_overpressure: f64,
    impulse: f64,
    arrival_time: Option<f64>,
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let mut spec = args.source.load()?;
    if let Some(t) = args.t_end {
        spec.t_end = t;
    }
    let cells = args.cells.unwrap_or(spec.cells);
    if cells < 3 {
        return Err(CliError::Config(format!("--cells must be at least 3, got {cells}")));
    }
    if !(args.cfl > 0.0 && args.cfl <= 1.0) {
        return Err(CliError::Config(format!("--cfl must lie in (0, 1], got {}", args.cfl)));
    }
    let mut params = RunParams::new(spec.t_end);
    params.cfl = args.cfl;
    params.riemann = args.solver.options()?;
    params.snapshots = args.snapshots.clone();
    params.gauges = args.gauges.clone().unwrap_or_else(|| spec.gauges.clone());
    let window = if args.positive_phase {
        ImpulseWindow::PositivePhase
    } else {
        ImpulseWindow::FullRecord
    };

    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let start = Instant::now();
    let result = run_simulation(&spec, cells, &params);
    let wall = start.elapsed().as_secs_f64();

    let mut manifest = json!({
        "problem": spec,
        "cells": cells,
        "cfl": params.cfl,
        "t_end": params.t_end,
        "tol": params.riemann.tol,
        "hugoniot_tol": params.riemann.hugoniot_tol,
        "substeps": params.riemann.substeps,
        "max_iter": params.riemann.max_iter,
        "impulse_window": window,
        "wall_time_s": wall,
    });
    let outcome = match result {
        Ok(out) => {
            let mut snaps = Vec::new();
            for (k, snap) in out.snapshots.iter().enumerate() {
                let file = format!("snapshot_{k:03}.csv");
                let path = args.out.join(&file);
                let mut w = create(&path)?;
                snap.write_csv(&mut w).and_then(|_| w.flush()).map_err(io_err(&path))?;
                snaps.push(SnapshotEntry { t: snap.t, file });
            }
            let mut gauges = Vec::new();
            for (k, g) in out.gauges.iter().enumerate() {
                let file = format!("gauge_{k:02}.csv");
                let path = args.out.join(&file);
                let mut w = create(&path)?;
                g.write_csv(&mut w).and_then(|_| w.flush()).map_err(io_err(&path))?;
                let m = shock_metrics(g, spec.p_ambient, window);
                gauges.push(GaugeEntry {
                    position: g.position,
                    file,
                    peak_overpressure: m.peak_overpressure,
                    impulse: m.impulse,
                    arrival_time: m.arrival_time,
                });
            }
            manifest["status"] = json!("ok");
            manifest["steps"] = json!(out.mesh.steps());
            manifest["final_time"] = json!(out.mesh.time());
            manifest["interface"] = json!(out.mesh.interface());
            manifest["audit"] = json!(out.audit);
            manifest["snapshots"] = json!(snaps);
            manifest["gauges"] = json!(gauges);
            Ok(())
        }
        Err(e) => {
            let err = CliError::Flow(e);
            manifest["status"] = json!("error");
            manifest["error"] = json!(err.to_string());
            manifest["exit_code"] = json!(err.code());
            Err(err)
        }
    };
    let path = args.out.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).unwrap();
    fs::write(&path, format!("{text}\n")).map_err(io_err(&path))?;
    if args.json {
        println!("{text}");
    }
    outcome
}

// Density window for the sweep: the validity interval, or two decades
// either side of a reference density when it is unbounded.
fn sweep_range(eos: &Eos, rho_ref: f64) -> (f64, f64) {
    let d = eos.validity_domain();
    let lo = if d.lower > 0.0 { d.lower } else { 1e-2 * rho_ref };
    let hi = if d.is_bounded_above() { d.upper } else { 1e2 * rho_ref };
    (lo, hi)
}

fn cmd_check_eos(args: &CheckEosArgs) -> Result<bool, CliError> {
    let sets: Vec<(String, Eos, f64)> = if args.source.problem.is_some() || args.source.config.is_some() {
        let spec = load(args.source.problem.as_deref(), args.source.config.as_deref())?;
        vec![
            (format!("{} left", spec.name), spec.left.eos, spec.left.state.rho),
            (format!("{} right", spec.name), spec.right.eos, spec.right.state.rho),
        ]
    } else {
        vec![
            ("jwl_shyue".into(), shyue_jwl(), 1840.0),
            ("cochran_chan_nitromethane".into(), nitromethane(), 1134.0),
            ("stiffened_water".into(), water_stiffened(), 1000.0),
            ("polynomial_water".into(), water_polynomial(), 1000.0),
            ("jwl_tnt".into(), tnt_jwl(), 1630.0),
        ]
    };
    let pressures: Vec<f64> = (0..13).map(|k| 10f64.powi(k)).collect();
    let reports: Vec<(String, ConditionReport)> = sets
        .iter()
        .map(|(name, eos, rho_ref)| {
            let (lo, hi) = sweep_range(eos, *rho_ref);
            (name.clone(), eos.check_conditions(lo, hi, args.points, &pressures))
        })
        .collect();

    let mut rows = Vec::new();
    for (name, r) in &reports {
        for o in &r.outcomes {
            rows.push(json!({
                "eos": name,
                "model": r.eos,
                "condition": o.condition.label(),
                "rho_min": r.rho_range.0,
                "rho_max": r.rho_range.1,
                "checked": o.checked,
                "violations": o.violations,
                "worst": o.worst.map(|w| w.2),
                "pass": o.passed(),
            }));
        }
        let d = r.domain;
        rows.push(json!({
            "eos": name,
            "model": r.eos,
            "condition": "validity bounds",
            "rho_min": d.lower,
            "rho_max": d.upper,
            "checked": 1,
            "violations": usize::from(!(d.upper > d.lower)),
            "worst": null,
            "pass": d.upper > d.lower,
        }));
    }
    let all_pass = rows.iter().all(|r| r["pass"] == json!(true));

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join("check_eos.csv");
        let mut w = create(&path)?;
        let write = |w: &mut BufWriter<File>| -> io::Result<()> {
            writeln!(w, "eos,model,condition,rho_min,rho_max,checked,violations,result")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},\"{}\",{:.16e},{:.16e},{},{},{}",
                    r["eos"].as_str().unwrap(),
                    r["model"].as_str().unwrap(),
                    r["condition"].as_str().unwrap(),
                    r["rho_min"].as_f64().unwrap_or(f64::INFINITY),
                    r["rho_max"].as_f64().unwrap_or(f64::INFINITY),
                    r["checked"],
                    r["violations"],
                    if r["pass"] == json!(true) { "pass" } else { "FAIL" },
                )?;
            }
            w.flush()
        };
        write(&mut w).map_err(io_err(&path))?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows).unwrap());
    } else {
        for r in &rows {
            println!(
                "{:<28} {:<34} {:>6} checked {:>4} violations  {}",
                r["eos"].as_str().unwrap(),
                r["condition"].as_str().unwrap(),
                r["checked"],
                r["violations"],
                if r["pass"] == json!(true) { "pass" } else { "FAIL" },
            );
        }
    }
    Ok(all_pass)
}

fn cmd_export(args: &ExportArgs) -> Result<(), CliError> {
    let text = builtin_problem(&args.problem)?.to_json();
    match &args.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(io_err(path)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Run(a) => cmd_run(a),
        Command::CheckEos(a) => match cmd_check_eos(a) {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("error: some EOS conditions failed");
                return ExitCode::from(5);
            }
            Err(e) => Err(e),
        },
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
