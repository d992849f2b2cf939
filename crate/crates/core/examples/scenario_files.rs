//! Generates a mobile two-zone scenario, writes it out as JSON and as a
//! waypoint file, and reads both back.

use gwp::scenario::{generate_two_zone, load_waypoints, save_waypoints, FapMobility, Scenario, TwoZoneParams};

fn main() -> gwp::Result<()> {
    let mut params = TwoZoneParams::scenario_b(0.75, 0.25, 3)?;
    params.duration = 20.0;
    params.mobility = FapMobility::RandomWaypoint {
        speed_min: 0.5,
        speed_max: 3.0,
    };
    let scenario = generate_two_zone(&params)?;
    for f in &scenario.faps {
        println!(
            "FAP {:>2}  {:>5.1} Mbit/s  starts at {}",
            f.id(),
            f.offered_rate_bps / 1e6,
            f.trajectory.position_at(0.0)
        );
    }

    let dir = std::env::temp_dir().join("gwp-scenario-files");
    std::fs::create_dir_all(&dir)?;
    let json = dir.join("scenario.json");
    let moves = dir.join("fap.movements");
    scenario.save(&json)?;
    let tracks: Vec<_> = scenario.faps.iter().map(|f| f.trajectory.clone()).collect();
    save_waypoints(&tracks, &moves)?;

    let back = Scenario::load(&json)?;
    let loaded = load_waypoints(&moves)?;
    println!("\nwrote {} and {}", json.display(), moves.display());
    println!("JSON round trip identical: {}", back == scenario);
    println!("waypoint file holds {} tracks of {} samples", loaded.len(), loaded[0].samples().len());
    Ok(())
}
