//! Seed sweep on the four-FAP square: traffic-aware placement against the
//! centroid, venue centre and random motion. Pass an output directory to keep
//! the report files.

use gwp::cli::{compare, CompareOptions, ScenarioSource, StrategyKind};
use gwp::scenario::scenario_a;
use gwp::sim::SimConfig;

fn main() -> gwp::Result<()> {
    let out = std::env::args().nth(1);
    let source = ScenarioSource::Fixed(scenario_a(0.75, 3.0)?);
    let opts = CompareOptions {
        strategies: vec![
            StrategyKind::Gwp,
            StrategyKind::Centroid,
            StrategyKind::VenueCenter,
            StrategyKind::Random,
        ],
        seeds: (1..=5).collect(),
        sim: SimConfig {
            duration: 30.0,
            warmup: 10.0,
            ..SimConfig::default()
        },
        ..CompareOptions::default()
    };
    let report = compare(&source, &opts)?;
    report.write_table(std::io::stdout())?;
    if let Some(dir) = out {
        report.save(&dir)?;
        println!("report written to {dir}");
    }
    Ok(())
}
