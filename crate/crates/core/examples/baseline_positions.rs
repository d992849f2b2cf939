//! Counterpart placements: FAP centroid, venue centre and a random-waypoint track.

use gwp::baselines::{fap_centroid, random_waypoint_track, venue_center};
use gwp::scenario::builtin;

fn main() -> gwp::Result<()> {
    let scenario = builtin("scenario-b-90-10")?;
    let faps = scenario.fap_states_at(0.0);
    println!("centroid     {}", fap_centroid(&faps)?);
    println!("venue centre {}", venue_center(&scenario.bounds));

    let track = random_waypoint_track(&scenario.bounds, 0.5, 3.0, 30.0, 1.0, 7)?;
    for w in track.samples().iter().step_by(5) {
        println!("t = {:>4} s  {}", w.t, w.position);
    }
    Ok(())
}
