//! Gateway tracks for moving FAPs, recomputed every second.

use gwp::baselines::PlacementStrategy;
use gwp::scenario::{generate_two_zone, plan_gateway_track, FapMobility, TwoZoneParams};

fn main() -> gwp::Result<()> {
    let mut params = TwoZoneParams::scenario_b(0.75, 0.25, 1)?;
    params.duration = 15.0;
    params.mobility = FapMobility::RandomWaypoint {
        speed_min: 0.5,
        speed_max: 3.0,
    };
    let scenario = generate_two_zone(&params)?;

    let gwp = plan_gateway_track(&scenario, &PlacementStrategy::Gwp)?;
    let centroid = plan_gateway_track(&scenario, &PlacementStrategy::FapCentroid)?;
    println!("{:>4}  {:>6}  {:<28} {:<28}", "t", "P_T", "gwp", "centroid");
    for (u, c) in gwp.updates.iter().zip(&centroid.updates) {
        let p = u.solution.as_ref().map(|s| s.tx_power_dbm).unwrap_or(f64::NAN);
        println!("{:>4}  {:>6}  {:<28} {:<28}", u.t, p, u.position.to_string(), c.position.to_string());
    }
    println!("highest power used: {:?} dBm", gwp.max_tx_power_dbm());
    Ok(())
}
