//! Traffic-aware placement for the four-FAP square.

use gwp::geometry::Point3;
use gwp::placement::{build_constraints, check_point, gwp_solve, min_max_excess};
use gwp::scenario::scenario_a;

fn main() -> gwp::Result<()> {
    let scenario = scenario_a(0.75, 3.0)?;
    let faps = scenario.fap_states_at(0.0);
    for f in &faps {
        println!("FAP {} at {} needs {} Mbit/s", f.id, f.position, f.demand_bps / 1e6);
    }

    let sol = gwp_solve(&faps, &scenario.mcs_table, &scenario.radio, &scenario.bounds)?;
    println!("\nP_T = {} dBm, gateway at {}", sol.tx_power_dbm, sol.position);
    println!("slacks (m): {:?}", sol.slacks.iter().map(|s| (s * 1e3).round() / 1e3).collect::<Vec<_>>());
    println!("required capacity {} Mbit/s", sol.required_capacity_bps / 1e6);

    let constraints = build_constraints(&faps, &scenario.mcs_table)?;
    let below = min_max_excess(&constraints, sol.tx_power_dbm - 1.0, &scenario.radio, &scenario.bounds)?;
    println!("one dB lower the best point still misses by {:.3} m", below.value);

    let hand_picked = Point3::new(23.3, 15.4, 3.3);
    let slacks = check_point(&hand_picked, &constraints, 22.0, &scenario.radio);
    println!("\n{hand_picked} at 22 dBm: slacks {slacks:.3?}");

    for c in &scenario.candidates {
        let s = check_point(&c.position, &constraints, sol.tx_power_dbm, &scenario.radio);
        let worst = s.iter().copied().fold(f64::INFINITY, f64::min);
        println!("{:<12} {}  worst slack {worst:>7.2} m", c.label, c.position);
    }
    Ok(())
}
