use serde::{Deserialize, Serialize};

use crate::baselines::{centroid, random_waypoint_track, PlacementStrategy, GATEWAY_NODE};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::placement::{gwp_solve, PlacementSolution};
use crate::trajectory::{sample_grid, Trajectory, Waypoint};

use super::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedUpdate {
    pub t: f64,
    pub position: Point3,
    /// Present for the traffic-aware strategy only.
    pub solution: Option<PlacementSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatewayPlan {
    pub strategy: PlacementStrategy,
    pub track: Trajectory,
    /// One entry per update instant; empty for random-waypoint motion.
    pub updates: Vec<PlannedUpdate>,
}

impl GatewayPlan {
    /// Highest transmission power chosen across update instants.
    pub fn max_tx_power_dbm(&self) -> Option<f64> {
        self.updates
            .iter()
            .filter_map(|u| u.solution.as_ref().map(|s| s.tx_power_dbm))
            .reduce(f64::max)
    }
}

/// Update instants `0, Δt, 2Δt, …`, closed with the scenario end.
fn update_instants(scenario: &Scenario) -> Vec<f64> {
    let mut ts = sample_grid(scenario.duration, scenario.update_period);
    if ts.last().is_some_and(|t| *t < scenario.duration) {
        ts.push(scenario.duration);
    }
    ts
}

/// Gateway positions at every update instant, linearly interpolated onto the
/// scenario's sample grid.
pub fn plan_gateway_track(scenario: &Scenario, strategy: &PlacementStrategy) -> Result<GatewayPlan> {
    scenario.validate()?;
    strategy.validate()?;

    if let PlacementStrategy::RandomWaypoint {
        speed_min,
        speed_max,
        seed,
    } = strategy
    {
        let track = random_waypoint_track(
            &scenario.bounds,
            *speed_min,
            *speed_max,
            scenario.duration,
            scenario.sample_period,
            *seed,
        )?;
        return Ok(GatewayPlan {
            strategy: strategy.clone(),
            track,
            updates: Vec::new(),
        });
    }

    let updates = update_instants(scenario)
        .into_iter()
        .map(|t| {
            let (position, solution) = match strategy {
                PlacementStrategy::Gwp => {
                    let faps = scenario.fap_states_at(t);
                    let sol = gwp_solve(&faps, &scenario.mcs_table, &scenario.radio, &scenario.bounds)
                        .map_err(|e| match e {
                            Error::NoSolution {
                                max_tx_power_dbm, ..
                            } => Error::NoSolution {
                                max_tx_power_dbm,
                                at_time: Some(t),
                            },
                            other => other,
                        })?;
                    (sol.position, Some(sol))
                }
                PlacementStrategy::FapCentroid => (
                    centroid(scenario.faps.iter().map(|f| f.trajectory.position_at(t)))?,
                    None,
                ),
                PlacementStrategy::VenueCenter => (scenario.bounds.center(), None),
                PlacementStrategy::Fixed { position, .. } => (*position, None),
                PlacementStrategy::RandomWaypoint { .. } => unreachable!("handled above"),
            };
            Ok(PlannedUpdate {
                t,
                position,
                solution,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let keyframes = Trajectory::new(
        GATEWAY_NODE,
        updates
            .iter()
            .map(|u| Waypoint {
                t: u.t,
                position: u.position,
            })
            .collect(),
    )?;
    let track = Trajectory::new(
        GATEWAY_NODE,
        sample_grid(scenario.duration, scenario.sample_period)
            .into_iter()
            .map(|t| Waypoint {
                t,
                position: keyframes.position_at(t),
            })
            .collect(),
    )?;
    Ok(GatewayPlan {
        strategy: strategy.clone(),
        track,
        updates,
    })
}
