//! Venues, FAP trajectories and demands, and the built-in evaluation
//! scenarios.
//!
//! Offered load and demanded link capacity are kept apart: a FAP offers
//! `offered_rate_bps` of traffic, and [`DemandMapping`] turns that into the
//! link capacity the placement solver must guarantee.

mod plan;
pub mod waypoints;

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{sample_legs, uniform_point, RandomWaypointLegs};
use crate::error::{Error, Result};
use crate::geometry::{Cuboid, Point3};
use crate::placement::{FapState, NodeId};
use crate::rf::{McsTable, RadioConfig};
use crate::seed;
use crate::trajectory::{sample_grid, Trajectory};

pub use plan::{plan_gateway_track, GatewayPlan, PlannedUpdate};
pub use waypoints::{load_waypoints, parse_waypoints, save_waypoints, write_waypoints};

pub const FORMAT_VERSION: u32 = 1;

/// PHY rate of the top 802.11ac MCS (160 MHz, 1 SS, 800 ns GI).
pub const TOP_PHY_RATE_BPS: f64 = 780e6;

/// Headroom applied by [`DemandMapping::SharedAirtime`] in the built-in
/// scenarios. With four FAPs it maps 146.25/48.75 Mbit/s of offered load onto
/// 702/234 Mbit/s of link capacity (MCS 8 and MCS 3).
pub const DEFAULT_AIRTIME_HEADROOM: f64 = 1.2;

/// Reference per-FAP demand for a network of `n_uavs` UAVs (gateway included).
pub fn fair_share(n_uavs: usize) -> Result<f64> {
    if n_uavs < 2 {
        return Err(Error::domain(format!(
            "fair share needs at least two UAVs, got {n_uavs}"
        )));
    }
    Ok(TOP_PHY_RATE_BPS / (n_uavs - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowDirection {
    /// FAP towards gateway.
    #[default]
    Uplink,
    Downlink,
}

/// How a FAP's offered load becomes the link capacity it demands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DemandMapping {
    /// Demanded capacity equals offered load.
    Identity,
    /// The FAP shares airtime with the other `n - 1` FAPs, so its link must
    /// run at `offered · n · headroom`, capped at the table's top rate and
    /// rounded to whole bit/s.
    SharedAirtime { headroom: f64 },
}

impl DemandMapping {
    pub fn capacity_bps(&self, offered_bps: f64, n_faps: usize, table: &McsTable) -> f64 {
        match *self {
            DemandMapping::Identity => offered_bps,
            DemandMapping::SharedAirtime { headroom } => {
                (offered_bps * n_faps as f64 * headroom)
                    .round()
                    .min(table.max_rate_bps())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FapSpec {
    pub trajectory: Trajectory,
    pub offered_rate_bps: f64,
    #[serde(default)]
    pub direction: FlowDirection,
}

impl FapSpec {
    pub fn id(&self) -> NodeId {
        self.trajectory.node
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePosition {
    pub label: String,
    pub position: Point3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub format_version: u32,
    pub name: String,
    pub bounds: Cuboid,
    pub faps: Vec<FapSpec>,
    /// Seconds.
    pub duration: f64,
    /// Interval between placement recomputations.
    pub update_period: f64,
    /// Position sampling period for tracks and link-rate updates.
    pub sample_period: f64,
    pub radio: RadioConfig,
    pub mcs_table: McsTable,
    pub demand_mapping: DemandMapping,
    #[serde(default)]
    pub candidates: Vec<CandidatePosition>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported scenario format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.faps.is_empty() {
            return Err(Error::invalid("scenario has no FAPs"));
        }
        if !(self.duration > 0.0) || !(self.sample_period > 0.0) || !(self.update_period > 0.0) {
            return Err(Error::invalid(
                "duration, sample period and update period must be positive",
            ));
        }
        if self.update_period < 1.0 {
            log::warn!(
                "update period {} s is below 1 s; placements are meant to change slowly",
                self.update_period
            );
        }
        self.radio.validate()?;
        for f in &self.faps {
            if !(f.offered_rate_bps > 0.0) {
                return Err(Error::invalid(format!("FAP {} offers no traffic", f.id())));
            }
            if !f.trajectory.covers(0.0, self.duration) {
                return Err(Error::invalid(format!(
                    "trajectory of FAP {} does not cover [0, {}] s",
                    f.id(),
                    self.duration
                )));
            }
            if !f.trajectory.inside(&self.bounds, 1e-9) {
                return Err(Error::invalid(format!("FAP {} leaves the venue", f.id())));
            }
        }
        Ok(())
    }

    /// FAP positions at `t` with the demanded link capacity of each.
    pub fn fap_states_at(&self, t: f64) -> Vec<FapState> {
        let n = self.faps.len();
        self.faps
            .iter()
            .map(|f| FapState {
                id: f.id(),
                position: f.trajectory.position_at(t),
                demand_bps: self
                    .demand_mapping
                    .capacity_bps(f.offered_rate_bps, n, &self.mcs_table),
            })
            .collect()
    }

    pub fn is_static(&self) -> bool {
        self.faps
            .iter()
            .all(|f| f.trajectory.samples().windows(2).all(|w| w[0].position == w[1].position))
    }

    /// Shortens the scenario. A single-solve update period shrinks with it.
    pub fn truncated(&self, duration: f64) -> Result<Scenario> {
        if !(duration > 0.0) || duration > self.duration {
            return Err(Error::invalid(format!(
                "duration {duration} s must lie in (0, {}] s",
                self.duration
            )));
        }
        let mut s = self.clone();
        if s.update_period >= s.duration {
            s.update_period = duration;
        }
        s.duration = duration;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        Scenario::from_json(&std::fs::read_to_string(path)?)
    }
}

const DEFAULT_DURATION: f64 = 130.0;

/// Four hovering FAPs on a 30 m square at 10 m altitude. The two FAPs on the
/// right (x = 30) offer `high_fraction · L`, the two on the left offer
/// `1 / ratio` of that, with `L` the fair share for five UAVs.
///
/// The seven corridor candidates are read off a figure rather than printed
/// coordinates, so they are approximate.
pub fn scenario_a(high_fraction: f64, ratio: f64) -> Result<Scenario> {
    if !(high_fraction > 0.0) || !(ratio > 0.0) {
        return Err(Error::domain("demand fraction and ratio must be positive"));
    }
    let lambda2 = high_fraction * fair_share(5)?;
    let lambda1 = lambda2 / ratio;
    let corners = [
        (Point3::new(30.0, 0.0, 10.0), lambda2),
        (Point3::new(30.0, 30.0, 10.0), lambda2),
        (Point3::new(0.0, 30.0, 10.0), lambda1),
        (Point3::new(0.0, 0.0, 10.0), lambda1),
    ];
    let faps = corners
        .iter()
        .enumerate()
        .map(|(i, (p, rate))| {
            Ok(FapSpec {
                trajectory: Trajectory::stationary(NodeId(i as u32 + 1), *p, DEFAULT_DURATION)?,
                offered_rate_bps: *rate,
                direction: FlowDirection::Uplink,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let corridor = [
        (30.0, 15.0),
        (22.5, 15.0),
        (15.0, 30.0),
        (15.0, 22.5),
        (15.0, 15.0),
        (15.0, 7.5),
        (7.5, 15.0),
    ];
    let candidates = corridor
        .iter()
        .enumerate()
        .map(|(i, (x, y))| CandidatePosition {
            label: format!("position-{}", i + 1),
            position: Point3::new(*x, *y, 10.0),
        })
        .collect();
    let scenario = Scenario {
        format_version: FORMAT_VERSION,
        name: "scenario-a".into(),
        bounds: Cuboid::from_dims(30.0, 30.0, 20.0)?,
        faps,
        duration: DEFAULT_DURATION,
        update_period: DEFAULT_DURATION,
        sample_period: 1.0,
        radio: RadioConfig::default(),
        mcs_table: McsTable::default(),
        demand_mapping: DemandMapping::SharedAirtime {
            headroom: DEFAULT_AIRTIME_HEADROOM,
        },
        candidates,
    };
    scenario.validate()?;
    Ok(scenario)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FapMobility {
    Static,
    /// Random waypoint inside the FAP's own zone.
    RandomWaypoint { speed_min: f64, speed_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoZoneParams {
    pub n_faps: usize,
    pub bounds: Cuboid,
    /// Fraction of the FAPs placed in the high-demand zone.
    pub zone_split: f64,
    /// Extent of each zone along x as a fraction of the venue; the low-demand
    /// zone hugs x = min, the high-demand zone hugs x = max. 0.5 gives halves.
    pub zone_width: f64,
    pub lambda1_bps: f64,
    pub lambda2_bps: f64,
    pub duration: f64,
    pub sample_period: f64,
    pub mobility: FapMobility,
    pub seed: u64,
    pub mcs_table: McsTable,
}

impl TwoZoneParams {
    /// 10 FAPs in an 80 m × 80 m × 20 m venue split into halves, static,
    /// demands given as fractions of the fair share.
    pub fn scenario_b(high_fraction: f64, low_fraction: f64, seed: u64) -> Result<Self> {
        let l = fair_share(11)?;
        Ok(TwoZoneParams {
            n_faps: 10,
            bounds: Cuboid::from_dims(80.0, 80.0, 20.0)?,
            zone_split: 0.5,
            zone_width: 0.5,
            lambda1_bps: low_fraction * l,
            lambda2_bps: high_fraction * l,
            duration: DEFAULT_DURATION,
            sample_period: 1.0,
            mobility: FapMobility::Static,
            seed,
            mcs_table: McsTable::default(),
        })
    }

    /// `[low zone, high zone]`.
    pub fn zones(&self) -> Result<[Cuboid; 2]> {
        let (lo, hi) = (self.bounds.min(), self.bounds.max());
        let w = (hi.x - lo.x) * self.zone_width;
        Ok([
            Cuboid::new(lo, Point3::new(lo.x + w, hi.y, hi.z))?,
            Cuboid::new(Point3::new(hi.x - w, lo.y, lo.z), hi)?,
        ])
    }
}

/// FAPs scattered uniformly in two demand zones. Ids 1..=n, low-demand
/// zone first.
pub fn generate_two_zone(params: &TwoZoneParams) -> Result<Scenario> {
    let p = params;
    if p.n_faps < 2 {
        return Err(Error::domain("two-zone scenarios need at least two FAPs"));
    }
    if !(0.0..=1.0).contains(&p.zone_split) || !(p.zone_width > 0.0 && p.zone_width <= 1.0) {
        return Err(Error::domain("zone split and width must be fractions"));
    }
    if !(p.lambda1_bps > 0.0 && p.lambda2_bps > 0.0) {
        return Err(Error::domain("zone demands must be positive"));
    }
    if !(p.duration > 0.0 && p.sample_period > 0.0) {
        return Err(Error::domain("duration and sample period must be positive"));
    }
    let zones = p.zones()?;
    let n_high = (p.n_faps as f64 * p.zone_split).round() as usize;
    let n_low = p.n_faps - n_high;

    let mut faps = Vec::with_capacity(p.n_faps);
    for i in 0..p.n_faps {
        let id = NodeId(i as u32 + 1);
        let (zone, rate) = if i < n_low {
            (&zones[0], p.lambda1_bps)
        } else {
            (&zones[1], p.lambda2_bps)
        };
        let mut rng = seed::stream(p.seed, &[0x5A4F, i as u64]);
        let trajectory = match p.mobility {
            FapMobility::Static => {
                Trajectory::stationary(id, uniform_point(zone, &mut rng), p.duration)?
            }
            FapMobility::RandomWaypoint {
                speed_min,
                speed_max,
            } => zone_waypoint_track(id, zone, speed_min, speed_max, p, rng)?,
        };
        faps.push(FapSpec {
            trajectory,
            offered_rate_bps: rate,
            direction: FlowDirection::Uplink,
        });
    }

    let scenario = Scenario {
        format_version: FORMAT_VERSION,
        name: format!("two-zone-{}-seed{}", p.n_faps, p.seed),
        bounds: p.bounds,
        faps,
        duration: p.duration,
        update_period: match p.mobility {
            FapMobility::Static => p.duration,
            FapMobility::RandomWaypoint { .. } => p.sample_period,
        },
        sample_period: p.sample_period,
        radio: RadioConfig::default(),
        mcs_table: p.mcs_table.clone(),
        demand_mapping: DemandMapping::SharedAirtime {
            headroom: DEFAULT_AIRTIME_HEADROOM,
        },
        candidates: Vec::new(),
    };
    scenario.validate()?;
    Ok(scenario)
}

fn zone_waypoint_track(
    id: NodeId,
    zone: &Cuboid,
    speed_min: f64,
    speed_max: f64,
    p: &TwoZoneParams,
    rng: impl Rng,
) -> Result<Trajectory> {
    if !(speed_min > 0.0 && speed_min <= speed_max) {
        return Err(Error::domain("FAP speeds must satisfy 0 < min <= max"));
    }
    let mut times = sample_grid(p.duration, p.sample_period);
    if times.last().is_some_and(|t| *t < p.duration) {
        times.push(p.duration);
    }
    let legs = RandomWaypointLegs::new(*zone, speed_min, speed_max, rng);
    Trajectory::new(id, sample_legs(legs, &times, zone))
}

pub const BUILTIN_NAMES: [&str; 3] = ["scenario-a", "scenario-b-90-10", "scenario-b-75-25"];

/// Seed used for the FAP layout of the built-in two-zone scenarios.
pub const DEFAULT_LAYOUT_SEED: u64 = 10;

/// Built-in scenarios by name.
pub fn builtin(name: &str) -> Result<Scenario> {
    let mut s = match name {
        "scenario-a" => return scenario_a(0.75, 3.0),
        "scenario-b-90-10" => generate_two_zone(&TwoZoneParams::scenario_b(0.9, 0.1, DEFAULT_LAYOUT_SEED)?)?,
        "scenario-b-75-25" => generate_two_zone(&TwoZoneParams::scenario_b(0.75, 0.25, DEFAULT_LAYOUT_SEED)?)?,
        other => {
            return Err(Error::invalid(format!(
                "unknown scenario {other:?}; expected one of {BUILTIN_NAMES:?}"
            )))
        }
    };
    s.name = name.to_string();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fair_share_values() {
        assert_eq!(fair_share(5).unwrap(), 195e6);
        assert_eq!(fair_share(11).unwrap(), 78e6);
        assert_eq!(fair_share(2).unwrap(), 780e6);
        assert!(fair_share(1).is_err());
        for n in 2..200 {
            let back = fair_share(n).unwrap() * (n - 1) as f64;
            assert!((back - 780e6).abs() <= 780e6 * 1e-15, "n = {n}");
        }
    }

    #[test]
    fn scenario_a_demands() {
        let s = scenario_a(0.75, 3.0).unwrap();
        let rates: Vec<f64> = s.faps.iter().map(|f| f.offered_rate_bps).collect();
        assert_eq!(rates, vec![146.25e6, 146.25e6, 48.75e6, 48.75e6]);
        let caps: Vec<f64> = s.fap_states_at(0.0).iter().map(|f| f.demand_bps).collect();
        assert_eq!(caps, vec![702e6, 702e6, 234e6, 234e6]);
        assert_eq!(s.candidates.len(), 7);
        assert_eq!(s.candidates[4].position, Point3::new(15.0, 15.0, 10.0));

        let uniform = scenario_a(0.75, 1.0).unwrap();
        assert!(uniform.faps.iter().all(|f| f.offered_rate_bps == 146.25e6));
    }

    #[test]
    fn scenario_a_constraints_use_reference_mcs() {
        let s = scenario_a(0.75, 3.0).unwrap();
        let cs = crate::placement::build_constraints(&s.fap_states_at(0.0), &s.mcs_table).unwrap();
        let snrs: Vec<f64> = cs.iter().map(|c| c.min_snr_db).collect();
        assert_eq!(snrs, vec![35.0, 35.0, 20.0, 20.0]);
    }

    #[test]
    fn two_zone_demand_combos() {
        let i = TwoZoneParams::scenario_b(0.9, 0.1, 7).unwrap();
        assert_eq!((i.lambda2_bps, i.lambda1_bps), (70.2e6, 7.8e6));
        let ii = TwoZoneParams::scenario_b(0.75, 0.25, 7).unwrap();
        assert_eq!((ii.lambda2_bps, ii.lambda1_bps), (58.5e6, 19.5e6));
    }

    #[test]
    fn two_zone_layout() {
        let params = TwoZoneParams::scenario_b(0.9, 0.1, 7).unwrap();
        let s = generate_two_zone(&params).unwrap();
        assert_eq!(s.faps.len(), 10);
        let zones = params.zones().unwrap();
        for f in &s.faps {
            let zone = if f.offered_rate_bps == params.lambda2_bps { &zones[1] } else { &zones[0] };
            assert!(zone.contains(&f.trajectory.position_at(0.0)));
        }
        assert_eq!(s.faps.iter().filter(|f| f.offered_rate_bps == 70.2e6).count(), 5);
        assert_eq!(s, generate_two_zone(&params).unwrap());
        let other = TwoZoneParams { seed: 8, ..params };
        assert_ne!(s.faps, generate_two_zone(&other).unwrap().faps);
    }

    #[test]
    fn mobile_two_zone_stays_in_zone() {
        let params = TwoZoneParams {
            mobility: FapMobility::RandomWaypoint {
                speed_min: 0.5,
                speed_max: 3.0,
            },
            duration: 60.0,
            ..TwoZoneParams::scenario_b(0.75, 0.25, 3).unwrap()
        };
        let s = generate_two_zone(&params).unwrap();
        assert!(!s.is_static());
        assert_eq!(s.update_period, 1.0);
        let zones = params.zones().unwrap();
        for f in &s.faps {
            let zone = if f.offered_rate_bps == params.lambda2_bps { &zones[1] } else { &zones[0] };
            assert!(f.trajectory.inside(zone, 1e-9));
            assert_eq!(f.trajectory.samples().len(), 61);
        }
    }

    #[test]
    fn json_round_trip_and_version_check() {
        let s = builtin("scenario-b-75-25").unwrap();
        let back = Scenario::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        let mut v = s.clone();
        v.format_version = 99;
        assert!(Scenario::from_json(&v.to_json().unwrap()).is_err());
        assert!(builtin("scenario-z").is_err());
    }

    #[test]
    fn truncation() {
        let s = scenario_a(0.75, 3.0).unwrap();
        let t = s.truncated(40.0).unwrap();
        assert_eq!((t.duration, t.update_period), (40.0, 40.0));
        assert!(t.validate().is_ok());
        assert!(s.truncated(200.0).is_err());
    }
}
