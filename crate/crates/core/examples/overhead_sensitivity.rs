//! How a fixed per-frame MAC cost changes the throughput and delay gains of
//! traffic-aware placement over the centroid.

use gwp::cli::{compare, resolve_source, CompareOptions};
use gwp::sim::SimConfig;

fn main() -> gwp::Result<()> {
    let seeds: u64 = std::env::args().nth(1).map_or(Ok(5), |s| s.parse()).unwrap_or(5);
    println!(
        "{:<18} {:>8} {:>12} {:>10} {:>10}",
        "scenario", "oh (us)", "p50 Mbit/s", "thr gain", "delay gain"
    );
    for name in ["scenario-a", "scenario-b-90-10", "scenario-b-75-25"] {
        let source = resolve_source(name)?;
        for overhead_us in [0.0, 10.0, 50.0, 200.0] {
            let opts = CompareOptions {
                seeds: (1..=seeds).collect(),
                sim: SimConfig {
                    duration: 30.0,
                    warmup: 10.0,
                    frame_overhead: overhead_us * 1e-6,
                    ..SimConfig::default()
                },
                ..CompareOptions::default()
            };
            let r = compare(&source, &opts)?;
            let thr = r.row("gwp", "throughput_bps", 0.5).expect("gwp row");
            let delay = r.row("gwp", "delay_s", 0.5).expect("gwp row");
            println!(
                "{:<18} {:>8} {:>12.2} {:>+9.2}% {:>+9.2}%",
                name,
                overhead_us,
                thr.value / 1e6,
                thr.gain_vs_baseline.unwrap_or(f64::NAN) * 100.0,
                delay.gain_vs_baseline.unwrap_or(f64::NAN) * 100.0
            );
        }
    }
    Ok(())
}
