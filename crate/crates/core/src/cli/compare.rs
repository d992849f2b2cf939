//! Seed-swept strategy comparison.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{aggregate_runs, gain, percentile, write_report_csv, MetricSeries, ReportRow, Unit};
use crate::baselines::PlacementStrategy;
use crate::error::{Error, Result};
use crate::scenario::{generate_two_zone, plan_gateway_track, GatewayPlan, Scenario, TwoZoneParams};
use crate::seed;
use crate::sim::{run_sim, SimConfig, SimSummary};

/// Strategy names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Gwp,
    Centroid,
    VenueCenter,
    Random,
}

impl StrategyKind {
    pub fn strategy(self, run_seed: u64) -> PlacementStrategy {
        match self {
            StrategyKind::Gwp => PlacementStrategy::Gwp,
            StrategyKind::Centroid => PlacementStrategy::FapCentroid,
            StrategyKind::VenueCenter => PlacementStrategy::VenueCenter,
            StrategyKind::Random => PlacementStrategy::random_waypoint(run_seed),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::Gwp => "gwp",
            StrategyKind::Centroid => "max-snr",
            StrategyKind::VenueCenter => "venue-center",
            StrategyKind::Random => "random",
        }
    }
}

/// Where each run's scenario comes from.
#[derive(Debug, Clone)]
pub enum ScenarioSource {
    Fixed(Scenario),
    /// A fresh two-zone layout per run, drawn from the run seed.
    TwoZone { name: String, params: TwoZoneParams },
}

impl ScenarioSource {
    pub fn name(&self) -> &str {
        match self {
            ScenarioSource::Fixed(s) => &s.name,
            ScenarioSource::TwoZone { name, .. } => name,
        }
    }

    pub fn for_run(&self, run_seed: u64) -> Result<Scenario> {
        match self {
            ScenarioSource::Fixed(s) => Ok(s.clone()),
            ScenarioSource::TwoZone { name, params } => {
                let mut s = generate_two_zone(&TwoZoneParams {
                    seed: run_seed,
                    ..params.clone()
                })?;
                s.name = name.clone();
                Ok(s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PercentileMode {
    /// Percentiles over the per-run means.
    #[default]
    RunMeans,
    /// Percentiles over all per-second throughput samples and all packet delays.
    TimeSamples,
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub strategies: Vec<StrategyKind>,
    /// Run indices; each is combined with `base_seed`.
    pub seeds: Vec<u64>,
    pub base_seed: u64,
    /// Template; `seed` and `tx_power_dbm` are set per run.
    pub sim: SimConfig,
    pub mode: PercentileMode,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            strategies: vec![StrategyKind::Gwp, StrategyKind::Centroid],
            seeds: (1..=20).collect(),
            base_seed: 10,
            sim: SimConfig::default(),
            mode: PercentileMode::RunMeans,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub strategy: String,
    pub seed: u64,
    pub tx_power_dbm: f64,
    pub summary: SimSummary,
    #[serde(skip)]
    throughput_bps: Vec<f64>,
    #[serde(skip)]
    delays: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub scenario: String,
    pub runs: Vec<RunRecord>,
    pub rows: Vec<ReportRow>,
}

pub const BASELINE: StrategyKind = StrategyKind::Centroid;
pub const REPORT_PERCENTILES: [f64; 2] = [0.5, 0.9];

pub fn run_seed(base_seed: u64, run: u64) -> u64 {
    seed::derive(base_seed, &[run])
}

/// Plans and simulates every strategy for every seed, then reports
/// percentiles and gains against the centroid baseline.
///
/// All strategies of a run share the transmission power chosen by the
/// traffic-aware placement for that run.
pub fn compare(source: &ScenarioSource, opts: &CompareOptions) -> Result<ComparisonReport> {
    if opts.strategies.is_empty() || opts.seeds.is_empty() {
        return Err(Error::invalid("need at least one strategy and one seed"));
    }
    let mut strategies = opts.strategies.clone();
    strategies.sort();
    strategies.dedup();

    let mut runs = Vec::with_capacity(strategies.len() * opts.seeds.len());
    for &run in &opts.seeds {
        let rs = run_seed(opts.base_seed, run);
        let (scenario, gwp_plan) = feasible_scenario(source, rs, opts.sim.duration)?;
        let tx_power = gwp_plan
            .max_tx_power_dbm()
            .expect("traffic-aware plans carry solutions");
        let sim = SimConfig {
            seed: rs,
            tx_power_dbm: Some(tx_power),
            ..opts.sim.clone()
        };
        for &kind in &strategies {
            let plan = match kind {
                StrategyKind::Gwp => gwp_plan.clone(),
                other => plan_gateway_track(&scenario, &other.strategy(rs))?,
            };
            let result = run_sim(&scenario, &plan.track, &sim)?;
            log::info!(
                "{} {} seed {run}: {:.1} Mbit/s",
                scenario.name,
                kind.label(),
                result.mean_throughput_bps() / 1e6
            );
            runs.push(RunRecord {
                strategy: kind.label().to_string(),
                seed: run,
                tx_power_dbm: tx_power,
                summary: result.summary(),
                throughput_bps: result.throughput_bps,
                delays: result.delays,
            });
        }
    }
    let rows = report_rows(source.name(), &strategies, &runs, opts.mode)?;
    Ok(ComparisonReport {
        scenario: source.name().to_string(),
        runs,
        rows,
    })
}

/// Redraws of a generated layout before giving up on a run.
pub const MAX_LAYOUT_ATTEMPTS: u64 = 100;

/// The run's scenario with its traffic-aware plan. Generated layouts that
/// admit no placement are redrawn from seeds derived from the run seed.
fn feasible_scenario(source: &ScenarioSource, rs: u64, duration: f64) -> Result<(Scenario, GatewayPlan)> {
    let attempts = match source {
        ScenarioSource::Fixed(_) => 1,
        ScenarioSource::TwoZone { .. } => MAX_LAYOUT_ATTEMPTS,
    };
    let mut last_err = None;
    for attempt in 0..attempts {
        let layout_seed = if attempt == 0 { rs } else { seed::derive(rs, &[attempt]) };
        let mut scenario = source.for_run(layout_seed)?;
        if duration < scenario.duration {
            scenario = scenario.truncated(duration)?;
        }
        match plan_gateway_track(&scenario, &PlacementStrategy::Gwp) {
            Ok(plan) => {
                if attempt > 0 {
                    log::info!("{}: layout redrawn {attempt} times", scenario.name);
                }
                return Ok((scenario, plan));
            }
            Err(e @ Error::NoSolution { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn metric_series(
    scenario: &str,
    label: &str,
    runs: &[RunRecord],
    mode: PercentileMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mine: Vec<&RunRecord> = runs.iter().filter(|r| r.strategy == label).collect();
    match mode {
        PercentileMode::RunMeans => {
            let thr: Vec<MetricSeries> = mine
                .iter()
                .map(|r| MetricSeries::new(r.throughput_bps.clone(), Unit::BitsPerSecond, scenario, label, Some(r.seed)))
                .collect();
            let delay: Vec<MetricSeries> = mine
                .iter()
                .filter(|r| !r.delays.is_empty())
                .map(|r| MetricSeries::new(r.delays.clone(), Unit::Seconds, scenario, label, Some(r.seed)))
                .collect();
            if delay.len() < mine.len() {
                log::warn!("{label}: {} runs delivered no packets", mine.len() - delay.len());
            }
            let delay = if delay.is_empty() {
                Vec::new()
            } else {
                aggregate_runs(&delay)?.samples
            };
            Ok((aggregate_runs(&thr)?.samples, delay))
        }
        PercentileMode::TimeSamples => Ok((
            mine.iter().flat_map(|r| r.throughput_bps.iter().copied()).collect(),
            mine.iter().flat_map(|r| r.delays.iter().copied()).collect(),
        )),
    }
}

fn report_rows(
    scenario: &str,
    strategies: &[StrategyKind],
    runs: &[RunRecord],
    mode: PercentileMode,
) -> Result<Vec<ReportRow>> {
    let series = strategies
        .iter()
        .map(|k| metric_series(scenario, k.label(), runs, mode).map(|s| (*k, s)))
        .collect::<Result<Vec<_>>>()?;
    let baseline = if strategies.len() > 1 {
        series.iter().find(|(k, _)| *k == BASELINE).map(|(_, s)| s)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (kind, (thr, delay)) in &series {
        for (metric, values, base, invert) in [
            ("throughput_bps", thr, baseline.map(|b| &b.0), false),
            ("delay_s", delay, baseline.map(|b| &b.1), true),
        ] {
            if values.is_empty() {
                continue;
            }
            for p in REPORT_PERCENTILES {
                let g = match base {
                    Some(b) if *kind != BASELINE && !b.is_empty() => match gain(values, b, p) {
                        Ok(g) => Some(if invert { -g } else { g }),
                        Err(Error::UndefinedGain) => None,
                        Err(e) => return Err(e),
                    },
                    _ => None,
                };
                rows.push(ReportRow {
                    strategy: kind.label().to_string(),
                    metric: metric.to_string(),
                    percentile: p,
                    value: percentile(values, p)?,
                    gain_vs_baseline: g,
                });
            }
        }
    }
    Ok(rows)
}

impl ComparisonReport {
    pub fn row(&self, strategy: &str, metric: &str, p: f64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.strategy == strategy && r.metric == metric && r.percentile == p)
    }

    /// Per-run mean values of one strategy, in run order.
    pub fn run_means(&self, strategy: &str) -> Vec<(u64, f64, Option<f64>)> {
        self.runs
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| (r.seed, r.summary.mean_throughput_bps, r.summary.mean_delay_s))
            .collect()
    }

    pub fn write_table(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "scenario {}", self.scenario)?;
        writeln!(
            w,
            "{:<14} {:<15} {:>5} {:>16} {:>9}",
            "strategy", "metric", "pct", "value", "gain"
        )?;
        for r in &self.rows {
            let value = if r.metric == "delay_s" {
                format!("{:.3} ms", r.value * 1e3)
            } else {
                format!("{:.2} Mbit/s", r.value / 1e6)
            };
            let gain = r
                .gain_vs_baseline
                .map(|g| format!("{:+.2}%", g * 100.0))
                .unwrap_or_default();
            writeln!(
                w,
                "{:<14} {:<15} {:>5} {:>16} {:>9}",
                r.strategy, r.metric, r.percentile, value, gain
            )?;
        }
        Ok(())
    }

    /// Writes `report.csv`, `report.json` and one summary per run.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut buf = Vec::new();
        write_report_csv(&self.rows, &mut buf)?;
        std::fs::write(dir.join("report.csv"), &buf)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)?)?;
        for r in &self.runs {
            let run_dir = dir.join("runs").join(&r.strategy);
            std::fs::create_dir_all(&run_dir)?;
            std::fs::write(
                run_dir.join(format!("seed-{}.json", r.seed)),
                serde_json::to_string_pretty(r)?,
            )?;
        }
        Ok(())
    }
}
