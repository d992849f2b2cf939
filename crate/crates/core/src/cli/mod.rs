//! Command-line front end: `generate`, `solve` and `compare`.

mod compare;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baselines::PlacementStrategy;
use crate::error::{Error, Result};
use crate::rf::McsTable;
use crate::scenario::{
    builtin, fair_share, generate_two_zone, plan_gateway_track, scenario_a, FapMobility, PlannedUpdate, Scenario,
    TwoZoneParams, BUILTIN_NAMES, DEFAULT_LAYOUT_SEED,
};
use crate::sim::SimConfig;

pub use compare::{
    compare, run_seed, CompareOptions, ComparisonReport, PercentileMode, RunRecord, ScenarioSource, StrategyKind,
    BASELINE, MAX_LAYOUT_ATTEMPTS, REPORT_PERCENTILES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gwp", version, about = "Traffic-aware gateway UAV placement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a scenario file.
    Generate(GenerateArgs),
    /// Place the gateway at every update instant and print the solutions as JSON.
    Solve(SolveArgs),
    /// Simulate placement strategies over a seed sweep and report gains.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// scenario-a, scenario-b, scenario-b-90-10 or scenario-b-75-25.
    pub name: String,
    /// Number of FAPs (scenario-b).
    #[arg(long)]
    pub faps: Option<usize>,
    /// High-zone demand as a fraction of the fair share; the low zone gets
    /// the rest (required for scenario-b).
    #[arg(long)]
    pub l2_frac: Option<f64>,
    /// Layout seed (scenario-b).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub duration: Option<f64>,
    /// Move FAPs by random waypoint inside their zones (scenario-b).
    #[arg(long)]
    pub mobile: bool,
    #[arg(long)]
    pub mcs_table: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Built-in scenario name or scenario file.
    #[arg(long)]
    pub scenario: String,
    #[arg(long)]
    pub mcs_table: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Built-in scenario name or scenario file.
    #[arg(long)]
    pub scenario: String,
    #[arg(long = "strategy", value_enum, required = true)]
    pub strategies: Vec<StrategyKind>,
    /// Run indices, e.g. `1..20` (inclusive) or `1,4,7`.
    #[arg(long, default_value = "1..20")]
    pub seeds: String,
    /// Base seed combined with each run index.
    #[arg(long, default_value_t = 10)]
    pub seed: u64,
    /// Output directory for report and per-run files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Simulated seconds per run.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Seconds at the start of each run left out of the statistics.
    #[arg(long)]
    pub warmup: Option<f64>,
    /// CSV rate table (`index,data_rate_bps,min_snr_db`) replacing the default.
    #[arg(long)]
    pub mcs_table: Option<PathBuf>,
    /// Fixed airtime added to every frame, in microseconds.
    #[arg(long, default_value_t = 0.0)]
    pub frame_overhead_us: f64,
    #[arg(long, value_enum, default_value_t = PercentileMode::RunMeans)]
    pub percentiles: PercentileMode,
}

/// Parses `a..b` (inclusive) or a comma-separated list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::invalid(format!("cannot read seed list {text:?}"));
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoSolution { .. } | Error::DemandUnsatisfiable { .. } => EXIT_INFEASIBLE,
        Error::Io(_) => EXIT_IO,
        Error::Invalid(_) | Error::Domain(_) | Error::Parse { .. } | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_OTHER,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(&a, stdout),
        Command::Solve(a) => cmd_solve(&a, stdout),
        Command::Compare(a) => cmd_compare(&a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_table(path: &Option<PathBuf>) -> Result<Option<McsTable>> {
    path.as_ref().map(McsTable::load).transpose()
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let two_zone_only = args.faps.is_some() || args.l2_frac.is_some() || args.seed.is_some() || args.mobile;
    let mut scenario = match args.name.as_str() {
        "scenario-b" => {
            let frac = args
                .l2_frac
                .ok_or_else(|| Error::invalid("scenario-b needs --l2-frac"))?;
            if !(frac > 0.0 && frac < 1.0) {
                return Err(Error::invalid(format!("--l2-frac {frac} must lie in (0, 1)")));
            }
            let mut p = TwoZoneParams::scenario_b(frac, 1.0 - frac, args.seed.unwrap_or(DEFAULT_LAYOUT_SEED))?;
            p.n_faps = args.faps.unwrap_or(p.n_faps);
            let l = fair_share(p.n_faps + 1)?;
            p.lambda2_bps = frac * l;
            p.lambda1_bps = l - p.lambda2_bps;
            if let Some(d) = args.duration {
                p.duration = d;
            }
            if args.mobile {
                p.mobility = FapMobility::RandomWaypoint {
                    speed_min: 0.5,
                    speed_max: 3.0,
                };
            }
            let mut s = generate_two_zone(&p)?;
            s.name = format!("scenario-b-{}", p.seed);
            s
        }
        name if two_zone_only => {
            return Err(Error::invalid(format!(
                "--faps, --l2-frac, --seed and --mobile apply to scenario-b, not {name}"
            )))
        }
        "scenario-a" => {
            let s = scenario_a(0.75, 3.0)?;
            match args.duration {
                Some(d) => with_duration(s, d)?,
                None => s,
            }
        }
        name => {
            let s = builtin(name)?;
            match args.duration {
                Some(d) => with_duration(s, d)?,
                None => s,
            }
        }
    };
    if let Some(t) = load_table(&args.mcs_table)? {
        scenario.mcs_table = t;
    }
    scenario.validate()?;
    emit(&scenario.to_json()?, &args.out, stdout)
}

/// Shortens, or lengthens a static scenario.
fn with_duration(s: Scenario, d: f64) -> Result<Scenario> {
    if d <= s.duration {
        return s.truncated(d);
    }
    if !s.is_static() {
        return Err(Error::invalid("cannot lengthen a scenario with moving FAPs"));
    }
    let mut s = s;
    for f in &mut s.faps {
        let p = f.trajectory.samples()[0].position;
        f.trajectory = crate::trajectory::Trajectory::stationary(f.trajectory.node, p, d)?;
    }
    if s.update_period >= s.duration {
        s.update_period = d;
    }
    s.duration = d;
    Ok(s)
}

/// A built-in name or a scenario file.
pub fn resolve_scenario(name_or_path: &str) -> Result<Scenario> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        return builtin(name_or_path);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::invalid(format!(
            "{name_or_path:?} is neither a built-in scenario ({}) nor a file",
            BUILTIN_NAMES.join(", ")
        )));
    }
    Scenario::load(path)
}

/// Like [`resolve_scenario`], but built-in two-zone names draw a fresh layout per run.
pub fn resolve_source(name_or_path: &str) -> Result<ScenarioSource> {
    let params = match name_or_path {
        "scenario-b-90-10" => Some(TwoZoneParams::scenario_b(0.9, 0.1, DEFAULT_LAYOUT_SEED)?),
        "scenario-b-75-25" => Some(TwoZoneParams::scenario_b(0.75, 0.25, DEFAULT_LAYOUT_SEED)?),
        _ => None,
    };
    Ok(match params {
        Some(params) => ScenarioSource::TwoZone {
            name: name_or_path.to_string(),
            params,
        },
        None => ScenarioSource::Fixed(resolve_scenario(name_or_path)?),
    })
}

#[derive(Debug, Serialize)]
struct SolveReport<'a> {
    scenario: &'a str,
    updates: &'a [PlannedUpdate],
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut scenario = resolve_scenario(&args.scenario)?;
    if let Some(t) = load_table(&args.mcs_table)? {
        scenario.mcs_table = t;
    }
    let plan = plan_gateway_track(&scenario, &PlacementStrategy::Gwp)?;
    let report = SolveReport {
        scenario: &scenario.name,
        updates: &plan.updates,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&text, &args.out, stdout)
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut source = resolve_source(&args.scenario)?;
    let mut sim = SimConfig {
        frame_overhead: args.frame_overhead_us * 1e-6,
        ..SimConfig::default()
    };
    let full = match &source {
        ScenarioSource::Fixed(s) => s.duration,
        ScenarioSource::TwoZone { params, .. } => params.duration,
    };
    sim.duration = args.duration.unwrap_or(full);
    if sim.duration > full {
        return Err(Error::invalid(format!(
            "--duration {} exceeds the scenario's {full} s",
            sim.duration
        )));
    }
    if let Some(w) = args.warmup {
        sim.warmup = w;
    }
    sim.validate()?;
    if let Some(t) = load_table(&args.mcs_table)? {
        match &mut source {
            ScenarioSource::Fixed(s) => s.mcs_table = t,
            ScenarioSource::TwoZone { params, .. } => params.mcs_table = t,
        }
    }
    let opts = CompareOptions {
        strategies: args.strategies.clone(),
        seeds: parse_seeds(&args.seeds)?,
        base_seed: args.seed,
        sim,
        mode: args.percentiles,
    };
    let report = compare(&source, &opts)?;
    report.write_table(&mut *stdout)?;
    if let Some(dir) = &args.out {
        report.save(dir)?;
    }
    Ok(())
}
