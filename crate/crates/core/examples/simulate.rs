//! One simulation run of the four-FAP square for two gateway positions,
//! plus the single-link queueing check.

use gwp::baselines::PlacementStrategy;
use gwp::scenario::{plan_gateway_track, scenario_a};
use gwp::sim::{analytic_single_link_oracle, run_sim, SimConfig};

fn main() -> gwp::Result<()> {
    let scenario = scenario_a(0.75, 3.0)?.truncated(40.0)?;
    let gwp = plan_gateway_track(&scenario, &PlacementStrategy::Gwp)?;
    let tx_power = gwp.max_tx_power_dbm();
    let config = SimConfig {
        duration: 40.0,
        warmup: 10.0,
        seed: 1,
        tx_power_dbm: tx_power,
        ..SimConfig::default()
    };

    for strategy in [PlacementStrategy::Gwp, PlacementStrategy::FapCentroid] {
        let plan = plan_gateway_track(&scenario, &strategy)?;
        let r = run_sim(&scenario, &plan.track, &config)?;
        let s = r.summary();
        println!(
            "{:<8} {:>7.2} Mbit/s  mean delay {:.1} us  p90 delay {:.1} us",
            strategy.label(),
            s.mean_throughput_bps / 1e6,
            s.mean_delay_s.unwrap_or(f64::NAN) * 1e6,
            s.delay_p90_s.unwrap_or(f64::NAN) * 1e6
        );
        for f in &r.flows {
            println!(
                "   FAP {}  {:>6.2} Mbit/s  drops {}+{}",
                f.source,
                f.received_rate_bps / 1e6,
                f.codel_drops,
                f.tail_drops
            );
        }
    }

    let o = analytic_single_link_oracle(702e6, 100e6, 11_200.0);
    println!(
        "\nM/D/1, 100 Mbit/s on a 702 Mbit/s link: mean delay {:.2} us",
        o.mean_delay_s.unwrap() * 1e6
    );
    Ok(())
}
