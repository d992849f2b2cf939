//! Throughput CCDF, delay CDF and percentiles from a single run, written as
//! two-column CSV for plotting.

use gwp::analysis::{ccdf, cdf, percentile};
use gwp::baselines::PlacementStrategy;
use gwp::scenario::{builtin, plan_gateway_track};
use gwp::sim::{run_sim, SimConfig};

fn main() -> gwp::Result<()> {
    let scenario = builtin("scenario-b-75-25")?.truncated(40.0)?;
    let plan = plan_gateway_track(&scenario, &PlacementStrategy::Gwp)?;
    let r = run_sim(
        &scenario,
        &plan.track,
        &SimConfig {
            duration: 40.0,
            warmup: 10.0,
            tx_power_dbm: plan.max_tx_power_dbm(),
            ..SimConfig::default()
        },
    )?;

    for p in [0.1, 0.5, 0.9] {
        println!(
            "p{:<3} throughput {:>7.2} Mbit/s   delay {:>7.1} us",
            (p * 100.0) as u32,
            percentile(&r.throughput_bps, p)? / 1e6,
            percentile(&r.delays, p)? * 1e6
        );
    }

    let dir = std::env::temp_dir().join("gwp-distributions");
    std::fs::create_dir_all(&dir)?;
    let mut f = std::fs::File::create(dir.join("throughput_ccdf.csv"))?;
    ccdf(&r.throughput_bps)?.write_csv(&mut f, ("R_bps", "ccdf"))?;
    let mut f = std::fs::File::create(dir.join("delay_cdf.csv"))?;
    cdf(&r.delays)?.write_csv(&mut f, ("delay_s", "cdf"))?;
    println!("step functions written to {}", dir.display());
    Ok(())
}
