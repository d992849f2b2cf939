//! Traffic-aware gateway placement.
//!
//! Every FAP demand fixes the lowest MCS able to carry it, hence a minimum
//! SNR, hence (for a given common transmission power) a sphere around the FAP
//! inside which the gateway must sit. The placement subspace is the
//! intersection of those spheres with the venue. Power is swept upward from
//! 0 dBm in 1 dB steps until the subspace is non-empty; the returned point is
//! the deepest one, i.e. the minimiser of the worst-case excess distance.

pub mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cuboid, Point3};
use crate::rf::{max_distance, McsTable, RadioConfig};

pub use solver::{Ball, ExcessOptimum};

/// Feasibility tolerance on the worst-case excess distance, in metres.
pub const EPS_FEAS: f64 = 1e-3;
/// Minimum gateway-to-FAP separation, in metres.
pub const EPS_SEP: f64 = 0.01;
/// Accuracy the inner solver reaches on the optimal excess, in metres.
pub const EPS_POS: f64 = 1e-3;

const SOLVER_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A FAP at one update instant. `demand_bps` is the link capacity the FAP
/// needs towards the gateway.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FapState {
    pub id: NodeId,
    pub position: Point3,
    pub demand_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrConstraint {
    pub center: Point3,
    pub min_snr_db: f64,
    pub demand_bps: f64,
    pub mcs_index: u8,
    pub data_rate_bps: f64,
}

impl SnrConstraint {
    pub fn radius(&self, tx_power_dbm: f64, config: &RadioConfig) -> f64 {
        max_distance(tx_power_dbm, self.min_snr_db, config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSolution {
    pub tx_power_dbm: f64,
    pub position: Point3,
    /// `d_max_i - d_i` per FAP, in input order.
    pub slacks: Vec<f64>,
    /// Sum of the data rates of the MCS selected for each FAP.
    pub required_capacity_bps: f64,
    /// Worst-case excess distance at the optimum, before the separation
    /// adjustment.
    pub excess_m: f64,
}

impl PlacementSolution {
    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn build_constraints(faps: &[FapState], table: &McsTable) -> Result<Vec<SnrConstraint>> {
    faps.iter()
        .map(|f| {
            let mcs = table.min_mcs_for_demand(f.demand_bps)?;
            Ok(SnrConstraint {
                center: f.position,
                min_snr_db: mcs.min_snr_db,
                demand_bps: f.demand_bps,
                mcs_index: mcs.index,
                data_rate_bps: mcs.data_rate_bps,
            })
        })
        .collect()
}

/// Per-constraint slack in metres; the point lies in the placement subspace
/// iff every slack is non-negative.
pub fn check_point(
    point: &Point3,
    constraints: &[SnrConstraint],
    tx_power_dbm: f64,
    config: &RadioConfig,
) -> Vec<f64> {
    constraints
        .iter()
        .map(|c| c.radius(tx_power_dbm, config) - point.distance(&c.center))
        .collect()
}

fn balls(constraints: &[SnrConstraint], tx_power_dbm: f64, config: &RadioConfig) -> Vec<Ball> {
    constraints
        .iter()
        .map(|c| Ball {
            center: c.center,
            radius: c.radius(tx_power_dbm, config),
        })
        .collect()
}

/// The point of `bounds` minimising `max_i (d_i - d_max_i)`, with that value.
/// The value is `<= 0` iff the placement subspace meets the venue.
pub fn min_max_excess(
    constraints: &[SnrConstraint],
    tx_power_dbm: f64,
    config: &RadioConfig,
    bounds: &Cuboid,
) -> Result<ExcessOptimum> {
    if constraints.is_empty() {
        return Err(Error::domain("min-max excess needs at least one constraint"));
    }
    Ok(solver::minimize_max_excess(
        &balls(constraints, tx_power_dbm, config),
        bounds,
        SOLVER_TOLERANCE,
        None,
    ))
}

/// Sum of demand-matched MCS rates. Logs a warning when the summed demand
/// exceeds the channel capacity.
pub fn required_capacity(faps: &[FapState], table: &McsTable, config: &RadioConfig) -> Result<f64> {
    let offered: f64 = faps.iter().map(|f| f.demand_bps).sum();
    if offered > config.max_channel_capacity_bps {
        log::warn!(
            "summed demand {:.3} Mbit/s exceeds channel capacity {:.3} Mbit/s",
            offered / 1e6,
            config.max_channel_capacity_bps / 1e6
        );
    }
    faps.iter()
        .map(|f| table.min_mcs_for_demand(f.demand_bps).map(|m| m.data_rate_bps))
        .sum()
}

/// Runs the power sweep and returns the first feasible power with the deepest
/// gateway position.
pub fn gwp_solve(
    faps: &[FapState],
    table: &McsTable,
    config: &RadioConfig,
    bounds: &Cuboid,
) -> Result<PlacementSolution> {
    config.validate()?;
    if faps.is_empty() {
        return Err(Error::domain("gateway placement needs at least one FAP"));
    }
    for f in faps {
        if !f.position.is_finite() || !bounds.contains_with_tolerance(&f.position, 1e-9) {
            return Err(Error::domain(format!(
                "FAP {} at {} lies outside the venue",
                f.id, f.position
            )));
        }
    }
    let constraints = build_constraints(faps, table)?;
    let required_capacity_bps = required_capacity(faps, table, config)?;

    let mut tx_power = 0.0;
    while tx_power <= config.max_tx_power_dbm {
        let opt = solver::minimize_max_excess(
            &balls(&constraints, tx_power, config),
            bounds,
            SOLVER_TOLERANCE,
            Some(EPS_FEAS),
        );
        if opt.value <= EPS_FEAS {
            let position = separate_from_faps(opt.point, &constraints, tx_power, config, bounds);
            return Ok(PlacementSolution {
                tx_power_dbm: tx_power,
                position,
                slacks: check_point(&position, &constraints, tx_power, config),
                required_capacity_bps,
                excess_m: opt.value,
            });
        }
        tx_power += 1.0;
    }
    Err(Error::NoSolution {
        max_tx_power_dbm: config.max_tx_power_dbm,
        at_time: None,
    })
}

/// The gateway may not coincide with a FAP. A point closer than [`EPS_SEP`]
/// to some FAP is moved to distance `EPS_SEP` from it, along the direction
/// (out of 26 lattice directions, fixed order) with the best worst slack.
fn separate_from_faps(
    point: Point3,
    constraints: &[SnrConstraint],
    tx_power: f64,
    config: &RadioConfig,
    bounds: &Cuboid,
) -> Point3 {
    let too_close = |p: &Point3| constraints.iter().find(|c| p.distance(&c.center) < EPS_SEP);
    let Some(near) = too_close(&point) else {
        return point;
    };
    let anchor = near.center;

    let mut best: Option<(f64, Point3)> = None;
    for dx in [-1.0, 0.0, 1.0] {
        for dy in [-1.0, 0.0, 1.0] {
            for dz in [-1.0, 0.0, 1.0] {
                let dir = Point3::new(dx, dy, dz);
                let n = dir.norm();
                if n == 0.0 {
                    continue;
                }
                // a relative nudge so rounding cannot land the point just inside
                let cand = anchor + dir * (EPS_SEP * (1.0 + 1e-12) / n);
                if !bounds.contains(&cand) || too_close(&cand).is_some() {
                    continue;
                }
                let worst = check_point(&cand, constraints, tx_power, config)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                if best.is_none_or(|(w, _)| worst > w) {
                    best = Some((worst, cand));
                }
            }
        }
    }
    best.map(|(_, p)| p).unwrap_or(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fap(id: u32, x: f64, y: f64, z: f64, demand: f64) -> FapState {
        FapState {
            id: NodeId(id),
            position: Point3::new(x, y, z),
            demand_bps: demand,
        }
    }

    /// Square of side 30 m at 10 m altitude; right side needs MCS 8, left MCS 3.
    fn square_instance() -> Vec<FapState> {
        vec![
            fap(1, 30.0, 0.0, 10.0, 702e6),
            fap(2, 30.0, 30.0, 10.0, 702e6),
            fap(3, 0.0, 30.0, 10.0, 234e6),
            fap(4, 0.0, 0.0, 10.0, 234e6),
        ]
    }

    #[test]
    fn constraints_follow_demand() {
        let t = McsTable::default();
        let cs = build_constraints(&square_instance(), &t).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[0].min_snr_db, 35.0);
        assert_eq!(cs[0].mcs_index, 8);
        assert_eq!(cs[3].min_snr_db, 20.0);
        assert_eq!(cs[3].mcs_index, 3);
        assert!(build_constraints(&[], &t).unwrap().is_empty());
    }

    #[test]
    fn slack_at_center_and_boundary() {
        let cfg = RadioConfig::default();
        let cs = build_constraints(&[fap(1, 5.0, 5.0, 5.0, 234e6)], &McsTable::default()).unwrap();
        let r = cs[0].radius(10.0, &cfg);
        assert_eq!(check_point(&cs[0].center, &cs, 10.0, &cfg), vec![r]);
        let edge = cs[0].center + Point3::new(r, 0.0, 0.0);
        assert!(check_point(&edge, &cs, 10.0, &cfg)[0].abs() < 1e-12);
    }

    #[test]
    fn reported_point_is_inside_subspace_at_22_dbm() {
        let cfg = RadioConfig::default();
        let cs = build_constraints(&square_instance(), &McsTable::default()).unwrap();
        let slacks = check_point(&Point3::new(23.3, 15.4, 3.3), &cs, 22.0, &cfg);
        assert!(slacks.iter().all(|s| *s >= -0.1), "{slacks:?}");
    }

    #[test]
    fn single_constraint_returns_center() {
        let cfg = RadioConfig::default();
        let bounds = Cuboid::from_dims(100.0, 100.0, 20.0).unwrap();
        let cs = build_constraints(&[fap(1, 40.0, 50.0, 10.0, 234e6)], &McsTable::default()).unwrap();
        let opt = min_max_excess(&cs, 0.0, &cfg, &bounds).unwrap();
        let r = cs[0].radius(0.0, &cfg);
        assert!(opt.point.distance(&cs[0].center) < EPS_POS);
        assert!((opt.value + r).abs() < EPS_POS);
    }

    #[test]
    fn two_tangent_spheres_meet_at_midpoint() {
        let cfg = RadioConfig::default();
        let bounds = Cuboid::from_dims(100.0, 100.0, 20.0).unwrap();
        let r = max_distance(0.0, 20.0, &cfg);
        let faps = [
            fap(1, 50.0 - r, 50.0, 10.0, 234e6),
            fap(2, 50.0 + r, 50.0, 10.0, 234e6),
        ];
        let cs = build_constraints(&faps, &McsTable::default()).unwrap();
        let opt = min_max_excess(&cs, 0.0, &cfg, &bounds).unwrap();
        assert!(opt.point.distance(&Point3::new(50.0, 50.0, 10.0)) < EPS_POS);
        assert!(opt.value.abs() < EPS_POS);
    }

    #[test]
    fn empty_constraints_rejected() {
        let bounds = Cuboid::from_dims(1.0, 1.0, 1.0).unwrap();
        assert!(min_max_excess(&[], 0.0, &RadioConfig::default(), &bounds).is_err());
    }

    #[test]
    fn single_fap_solves_at_zero_dbm() {
        let bounds = Cuboid::from_dims(100.0, 100.0, 20.0).unwrap();
        let faps = [fap(1, 0.0, 0.0, 10.0, 234e6)];
        let sol = gwp_solve(&faps, &McsTable::default(), &RadioConfig::default(), &bounds).unwrap();
        assert_eq!(sol.tx_power_dbm, 0.0);
        let d = sol.position.distance(&faps[0].position);
        assert!((EPS_SEP - 1e-12..=8.09).contains(&d), "d = {d}");
        assert!(bounds.contains(&sol.position));
        assert_eq!(sol.required_capacity_bps, 234e6);
    }

    #[test]
    fn over_demand_fails() {
        let bounds = Cuboid::from_dims(100.0, 100.0, 20.0).unwrap();
        let faps = [fap(1, 0.0, 0.0, 10.0, 800e6)];
        let err = gwp_solve(&faps, &McsTable::default(), &RadioConfig::default(), &bounds).unwrap_err();
        assert!(matches!(err, Error::DemandUnsatisfiable { .. }));
    }

    #[test]
    fn unreachable_spread_has_no_solution() {
        let bounds = Cuboid::from_dims(1000.0, 1000.0, 20.0).unwrap();
        let faps = [fap(1, 0.0, 0.0, 10.0, 780e6), fap(2, 1000.0, 1000.0, 10.0, 780e6)];
        let err = gwp_solve(&faps, &McsTable::default(), &RadioConfig::default(), &bounds).unwrap_err();
        assert!(matches!(err, Error::NoSolution { .. }));
    }

    #[test]
    fn fap_outside_venue_rejected() {
        let bounds = Cuboid::from_dims(10.0, 10.0, 10.0).unwrap();
        let faps = [fap(1, 11.0, 0.0, 5.0, 1e6)];
        assert!(gwp_solve(&faps, &McsTable::default(), &RadioConfig::default(), &bounds).is_err());
        assert!(gwp_solve(&[], &McsTable::default(), &RadioConfig::default(), &bounds).is_err());
    }

    #[test]
    fn required_capacity_sums_mcs_rates() {
        let t = McsTable::default();
        let cfg = RadioConfig::default();
        assert_eq!(required_capacity(&square_instance(), &t, &cfg).unwrap(), 1872e6);
        assert_eq!(required_capacity(&[], &t, &cfg).unwrap(), 0.0);
        assert_eq!(
            required_capacity(&[fap(1, 0.0, 0.0, 0.0, 234e6)], &t, &cfg).unwrap(),
            234e6
        );
    }
}
