#![allow(dead_code)]

use gwp::baselines::GATEWAY_NODE;
use gwp::geometry::{Cuboid, Point3};
use gwp::placement::{NodeId, SnrConstraint};
use gwp::rf::{max_distance, McsTable, RadioConfig};
use gwp::scenario::{DemandMapping, FapSpec, FlowDirection, Scenario, FORMAT_VERSION};
use gwp::trajectory::Trajectory;

pub const PACKET_BITS: f64 = 11_200.0;
pub const TEST_POWER_DBM: f64 = 30.0;
pub const GW: Point3 = Point3::new(2000.0, 2000.0, 50.0);

/// Distance that puts a link in the middle of MCS `index`'s SNR band at
/// `TEST_POWER_DBM`.
pub fn distance_for_mcs(index: usize) -> f64 {
    let table = McsTable::default();
    let e = table.entries();
    let lo = e[index].min_snr_db;
    let hi = e.get(index + 1).map_or(lo + 2.0, |n| n.min_snr_db);
    max_distance(TEST_POWER_DBM, 0.5 * (lo + hi), &RadioConfig::default())
}

/// Static FAPs around a fixed gateway; each entry is (offered bit/s, MCS index).
pub fn star(links: &[(f64, usize)], duration: f64) -> (Scenario, Trajectory) {
    let faps = links
        .iter()
        .enumerate()
        .map(|(i, &(rate, mcs))| {
            let angle = i as f64 * 0.7;
            let d = distance_for_mcs(mcs);
            let pos = GW + Point3::new(d * angle.cos(), d * angle.sin(), 0.0);
            FapSpec {
                trajectory: Trajectory::stationary(NodeId(i as u32 + 1), pos, duration).unwrap(),
                offered_rate_bps: rate,
                direction: FlowDirection::Uplink,
            }
        })
        .collect();
    let scenario = Scenario {
        format_version: FORMAT_VERSION,
        name: "star".into(),
        bounds: Cuboid::from_dims(4000.0, 4000.0, 100.0).unwrap(),
        faps,
        duration,
        update_period: duration,
        sample_period: 1.0,
        radio: RadioConfig::default(),
        mcs_table: McsTable::default(),
        demand_mapping: DemandMapping::Identity,
        candidates: vec![],
    };
    let track = Trajectory::stationary(GATEWAY_NODE, GW, duration).unwrap();
    (scenario, track)
}

/// A sphere constraint with the given radius at 0 dBm.
pub fn ball(center: Point3, radius: f64) -> SnrConstraint {
    let k = RadioConfig::default().link_constant_db();
    SnrConstraint {
        center,
        min_snr_db: k - 20.0 * radius.log10(),
        demand_bps: 1.0,
        mcs_index: 0,
        data_rate_bps: 1.0,
    }
}

/// Exhaustive scan of the grid `min + k·step` inside `bounds` for a point
/// inside every sphere. Along each (x, y) column the feasible z values form
/// an interval, so each column costs one pass over the constraints.
pub fn grid_has_feasible_point(centers: &[(Point3, f64)], bounds: &Cuboid, step: f64) -> bool {
    let (lo, hi) = (bounds.min(), bounds.max());
    let n = |a: f64, b: f64| ((b - a) / step + 1e-9).floor() as i64;
    let (nx, ny, nz) = (n(lo.x, hi.x), n(lo.y, hi.y), n(lo.z, hi.z));
    for i in 0..=nx {
        let x = lo.x + i as f64 * step;
        for j in 0..=ny {
            let y = lo.y + j as f64 * step;
            let (mut zlo, mut zhi) = (lo.z, lo.z + nz as f64 * step);
            for (c, r) in centers {
                let h2 = r * r - (x - c.x).powi(2) - (y - c.y).powi(2);
                if h2 < 0.0 {
                    zlo = f64::INFINITY;
                    break;
                }
                let h = h2.sqrt();
                zlo = zlo.max(c.z - h);
                zhi = zhi.min(c.z + h);
            }
            if zlo > zhi {
                continue;
            }
            // smallest grid z at or above zlo
            let k = ((zlo - lo.z) / step).ceil().max(0.0);
            let z = lo.z + k * step;
            if z <= zhi {
                return true;
            }
        }
    }
    false
}
