//! The `cyclewalk` command-line front end.
//!
//! Exit statuses: 0 success, 1 experiment-level failure (a threshold breach
//! or a failed cell), 2 usage error.

pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::analysis::{
    self, memory_spectrum_deviation, mixing_curve, power_of_two_horizons, residue_distance_curve, run_parallel,
    sweep, theorem1_max_deviation, theorem2_max_deviation, tv_from_uniform, SweepGrid, THEOREM_TOL,
};
use crate::coin::{CoinConfig, NamedState};
use crate::spectral::SpectralCache;
use crate::walk::{position_distribution, Model, WalkState};

pub use config::{Format, RunConfig};
use config::{parse_d_range, parse_phi_grid, parse_state, ParsedState};
use table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance for eigenvalue multisets of the memory and recycled blocks.
const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "cyclewalk", version, about = "Recycled-coin and memory quantum walks on the d-cycle")]
pub struct Cli {
    /// TOML file with default option values; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position distribution after t steps, by direct stepping.
    Evolve(RunConfig),
    /// Time-averaged (limiting) distribution from the spectral sum.
    Limiting(RunConfig),
    /// Uniformity classification over a (d, phi, state) grid.
    Sweep(RunConfig),
    /// Distance from uniform of the finite-T time average.
    Mixing(RunConfig),
    /// Check the reflection and memory-walk equivalences by direct stepping.
    Verify(RunConfig),
    /// Distance between the phi=0 and phi=2 (reflected state) limits per d.
    Residue(RunConfig),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Limiting(_) => "limiting",
            Command::Sweep(_) => "sweep",
            Command::Mixing(_) => "mixing",
            Command::Verify(_) => "verify",
            Command::Residue(_) => "residue",
        }
    }

    fn into_config(self) -> RunConfig {
        match self {
            Command::Evolve(c)
            | Command::Limiting(c)
            | Command::Sweep(c)
            | Command::Mixing(c)
            | Command::Verify(c)
            | Command::Residue(c) => c,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Experiment(String),
}

type Outcome = Result<Report, Failure>;

/// A finished table plus whether the experiment met its thresholds.
struct Report {
    table: Table,
    failed: bool,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn experiment(e: impl std::fmt::Display) -> Failure {
    Failure::Experiment(e.to_string())
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    let file_cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_USAGE;
            }
        },
        None => RunConfig::default(),
    };
    let name = cli.command.name();
    let cfg = cli.command.into_config().over(file_cfg);
    match dispatch(name, cfg.clone(), stderr) {
        Ok(report) => match emit(&report.table, &cfg, stdout) {
            Ok(()) if report.failed => EXIT_FAILURE,
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                EXIT_FAILURE
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Experiment(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn emit(table: &Table, cfg: &RunConfig, stdout: &mut dyn Write) -> io::Result<()> {
    let format = cfg.format.unwrap_or_default();
    let write = |out: &mut dyn Write| match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    };
    match &cfg.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()
        }
        None => write(stdout),
    }
}

fn dispatch(name: &str, mut cfg: RunConfig, stderr: &mut dyn Write) -> Outcome {
    match name {
        "evolve" => cmd_evolve(&mut cfg, stderr),
        "limiting" => cmd_limiting(&mut cfg, stderr),
        "sweep" => cmd_sweep(&mut cfg, stderr),
        "mixing" => cmd_mixing(&mut cfg, stderr),
        "verify" => cmd_verify(&mut cfg, stderr),
        "residue" => cmd_residue(&mut cfg, stderr),
        other => Err(usage(format!("unknown command {other}"))),
    }
}

fn echo(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).unwrap_or(Value::Null)
}

fn require_d(cfg: &RunConfig) -> Result<usize, Failure> {
    let d = cfg.d.ok_or_else(|| usage("--d is required"))?;
    if d < 2 {
        return Err(usage(format!("--d must be at least 2, got {d}")));
    }
    Ok(d)
}

fn d_values(cfg: &mut RunConfig, default: Option<&str>) -> Result<Vec<usize>, Failure> {
    let spec = match (&cfg.d_range, cfg.d) {
        (Some(r), _) => r.clone(),
        (None, Some(d)) => d.to_string(),
        (None, None) => default.ok_or_else(|| usage("--d-range is required"))?.to_string(),
    };
    let values = parse_d_range(&spec).map_err(usage)?;
    if let Some(bad) = values.iter().find(|&&d| d < 2) {
        return Err(usage(format!("cycle sizes must be at least 2, got {bad}")));
    }
    cfg.d_range = Some(spec);
    Ok(values)
}

fn phi_values(cfg: &mut RunConfig, default: &str) -> Result<Vec<f64>, Failure> {
    let spec = match (&cfg.phi_grid, cfg.phi) {
        (Some(g), _) => g.clone(),
        (None, Some(phi)) => phi.to_string(),
        (None, None) => default.to_string(),
    };
    let values = parse_phi_grid(&spec).map_err(usage)?;
    if values.is_empty() {
        return Err(usage("empty --phi-grid"));
    }
    if let Some(bad) = values.iter().find(|p| !p.is_finite()) {
        return Err(usage(format!("invalid phi {bad}")));
    }
    cfg.phi_grid = Some(spec);
    Ok(values)
}

fn phi_value(cfg: &mut RunConfig) -> Result<f64, Failure> {
    let phi = cfg.phi.unwrap_or(0.0);
    if !phi.is_finite() {
        return Err(usage(format!("invalid --phi {phi}")));
    }
    cfg.phi = Some(phi);
    Ok(phi)
}

fn model(cfg: &mut RunConfig) -> Result<Model, Failure> {
    let m: Model = cfg.model.as_deref().unwrap_or("recycled").parse().map_err(|e: crate::WalkError| usage(e.to_string()))?;
    cfg.model = Some(match m {
        Model::Recycled => "recycled".into(),
        Model::Memory => "memory".into(),
    });
    Ok(m)
}

fn report_renormalized(parsed: &ParsedState, stderr: &mut dyn Write) {
    if let Some(norm) = parsed.renormalized_from {
        let _ = writeln!(stderr, "warning: custom state had norm {norm}, normalized");
    }
}

fn single_state(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Result<ParsedState, Failure> {
    if cfg.state.len() > 1 {
        return Err(usage("this command takes a single --state"));
    }
    if cfg.state.is_empty() {
        cfg.state = vec!["psi_a".into()];
    }
    let parsed = parse_state(&cfg.state[0]).map_err(usage)?;
    report_renormalized(&parsed, stderr);
    Ok(parsed)
}

fn many_states(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Result<Vec<ParsedState>, Failure> {
    if cfg.state.is_empty() {
        cfg.state = NamedState::ALL.iter().map(|s| s.name().to_string()).collect();
    }
    cfg.state
        .iter()
        .map(|s| {
            let parsed = parse_state(s).map_err(usage)?;
            report_renormalized(&parsed, stderr);
            Ok(parsed)
        })
        .collect()
}

fn jobs(cfg: &mut RunConfig) -> Result<usize, Failure> {
    let jobs = match cfg.jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(j) => j,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    Ok(jobs)
}

fn epsilon(cfg: &mut RunConfig) -> Result<f64, Failure> {
    let eps = cfg.epsilon.unwrap_or(analysis::DEFAULT_EPSILON);
    if !(eps > 0.0) {
        return Err(usage(format!("--epsilon must be positive, got {eps}")));
    }
    cfg.epsilon = Some(eps);
    Ok(eps)
}

fn cmd_evolve(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let d = require_d(cfg)?;
    let phi = phi_value(cfg)?;
    let model = model(cfg)?;
    let state = single_state(cfg, stderr)?;
    let t = cfg.t.ok_or_else(|| usage("--t is required"))?;
    let start = WalkState::localized(d, model, &state.init).map_err(|e| usage(e.to_string()))?;
    let end = crate::walk::evolve(&start, t as usize, &CoinConfig::new(phi));
    let dist = position_distribution(&end).map_err(experiment)?;

    let mut table = Table::new("evolve", echo(cfg), vec!["n", "probability"]);
    for (n, p) in dist.probs().iter().enumerate() {
        table.push(vec![n.into(), (*p).into()]);
    }
    table.summarize("norm", end.norm());
    Ok(Report { table, failed: false })
}

fn cmd_limiting(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let d = require_d(cfg)?;
    let phi = phi_value(cfg)?;
    let model = model(cfg)?;
    let state = single_state(cfg, stderr)?;
    let result = SpectralCache::for_model(model, d, &CoinConfig::new(phi))
        .and_then(|cache| cache.limiting_distribution(&state.init))
        .map_err(experiment)?;
    for w in &result.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let flagged = !result.warnings.is_empty();
    let mut table = Table::new("limiting", echo(cfg), vec!["n", "pbar", "warning"]);
    for (n, p) in result.distribution.probs().iter().enumerate() {
        table.push(vec![n.into(), (*p).into(), flagged.into()]);
    }
    table.summarize("tv_from_uniform", tv_from_uniform(&result.distribution));
    Ok(Report { table, failed: false })
}

fn cmd_sweep(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let ds = d_values(cfg, None)?;
    let phis = phi_values(cfg, "0:0.1:7.9")?;
    let states = many_states(cfg, stderr)?
        .into_iter()
        .map(|s| s.init.name.ok_or_else(|| usage("sweep takes named states only")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = phis.iter().find(|p| !(0.0..8.0).contains(*p)) {
        return Err(usage(format!("sweep phi values must lie in [0, 8), got {bad}")));
    }
    let eps = epsilon(cfg)?;
    let jobs = jobs(cfg)?;
    let grid = SweepGrid::new(ds, phis, states).map_err(|e| usage(e.to_string()))?;
    let records = sweep(&grid, eps, jobs).map_err(experiment)?;

    let mut table = Table::new(
        "sweep",
        echo(cfg),
        vec![
            "d",
            "phi",
            "state",
            "tv_from_uniform",
            "classified_uniform",
            "d_mod4",
            "divisible_by_12",
            "boundary",
            "warnings",
            "error",
        ],
    );
    let (mut failed, mut non_uniform, mut boundary) = (0usize, 0usize, 0usize);
    for r in &records {
        if let Some(e) = &r.error {
            failed += 1;
            let _ = writeln!(stderr, "error: cell d={} phi={} {}: {e}", r.d, r.phi, r.state);
        }
        for w in &r.warnings {
            let _ = writeln!(stderr, "warning: cell d={} phi={} {}: {w}", r.d, r.phi, r.state);
        }
        if r.error.is_none() && !r.classified_uniform {
            non_uniform += 1;
        }
        if r.boundary {
            boundary += 1;
            let _ = writeln!(
                stderr,
                "warning: boundary cell d={} phi={} {}: tv_from_uniform={:e}",
                r.d, r.phi, r.state, r.tv_from_uniform
            );
        }
        table.push(vec![
            r.d.into(),
            r.phi.into(),
            r.state.name().into(),
            r.tv_from_uniform.into(),
            r.classified_uniform.into(),
            r.d_mod4.into(),
            r.divisible_by_12.into(),
            r.boundary.into(),
            r.warnings.len().into(),
            r.error.clone().unwrap_or_default().into(),
        ]);
    }
    table.summarize("cells", records.len());
    table.summarize("non_uniform", non_uniform);
    table.summarize("boundary", boundary);
    table.summarize("failed", failed);
    Ok(Report {
        table,
        failed: failed > 0,
    })
}

fn cmd_mixing(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let d = require_d(cfg)?;
    let phi = phi_value(cfg)?;
    let state = single_state(cfg, stderr)?;
    let t_max = cfg.t_max.ok_or_else(|| usage("--t-max is required"))?;
    if t_max < 1 {
        return Err(usage("--t-max must be at least 1"));
    }
    let curve = mixing_curve(d, phi, &state.init, &power_of_two_horizons(t_max)).map_err(experiment)?;
    let mut table = Table::new("mixing", echo(cfg), vec!["T", "sd"]);
    for (t, sd) in curve.horizons.iter().zip(&curve.distances) {
        table.push(vec![(*t).into(), (*sd).into()]);
    }
    Ok(Report { table, failed: false })
}

#[derive(Clone, Copy)]
enum Check {
    Reflection { phi: f64 },
    Memory,
    Spectrum,
}

fn cmd_verify(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let ds = d_values(cfg, Some("3..12"))?;
    let phis = phi_values(cfg, "0,0.7,1,2,3.3")?;
    let states = many_states(cfg, stderr)?;
    let t_max = cfg.t_max.unwrap_or(40);
    cfg.t_max = Some(t_max);
    let jobs = jobs(cfg)?;

    let mut tasks: Vec<(usize, Check, Option<usize>)> = Vec::new();
    for &d in &ds {
        for (si, _) in states.iter().enumerate() {
            for &phi in &phis {
                tasks.push((d, Check::Reflection { phi }, Some(si)));
            }
            tasks.push((d, Check::Memory, Some(si)));
        }
        tasks.push((d, Check::Spectrum, None));
    }
    let results = run_parallel(jobs, &tasks, |&(d, check, si)| {
        let coin = si.map(|i| states[i].init.coin);
        match (check, coin) {
            (Check::Reflection { phi }, Some(c)) => theorem1_max_deviation(d, t_max as usize, phi, &c),
            (Check::Memory, Some(c)) => theorem2_max_deviation(d, t_max as usize, &c),
            _ => memory_spectrum_deviation(d),
        }
    });

    let mut table = Table::new(
        "verify",
        echo(cfg),
        vec!["check", "d", "phi", "state", "t_max", "max_deviation", "tolerance", "pass"],
    );
    let mut failures = 0usize;
    for ((d, check, si), result) in tasks.iter().zip(results) {
        let (name, phi, tol) = match check {
            Check::Reflection { phi } => ("reflection", *phi, THEOREM_TOL),
            Check::Memory => ("memory", 2.0, THEOREM_TOL),
            Check::Spectrum => ("memory-spectrum", 2.0, SPECTRUM_TOL),
        };
        let label = si.map(|i| states[i].init.label()).unwrap_or_else(|| "-".into());
        let deviation = match result {
            Ok(v) => v,
            Err(e) => {
                let _ = writeln!(stderr, "error: {name} d={d} phi={phi} {label}: {e}");
                f64::NAN
            }
        };
        let pass = deviation < tol;
        if !pass {
            failures += 1;
        }
        table.push(vec![
            name.into(),
            (*d).into(),
            phi.into(),
            label.into(),
            t_max.into(),
            deviation.into(),
            tol.into(),
            pass.into(),
        ]);
    }
    table.summarize("checks", tasks.len());
    table.summarize("failures", failures);
    Ok(Report {
        table,
        failed: failures > 0,
    })
}

fn cmd_residue(cfg: &mut RunConfig, stderr: &mut dyn Write) -> Outcome {
    let ds = d_values(cfg, None)?;
    let state = single_state(cfg, stderr)?;
    let jobs = jobs(cfg)?;
    let rows = residue_distance_curve(&ds, &state.init.coin, jobs).map_err(experiment)?;
    let mut table = Table::new("residue", echo(cfg), vec!["d", "d_mod4", "tv"]);
    for r in rows {
        table.push(vec![r.d.into(), r.d_mod4.into(), r.tv.into()]);
    }
    Ok(Report { table, failed: false })
}
