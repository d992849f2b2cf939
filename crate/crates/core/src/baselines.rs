//! Counterpart gateway placements used for comparison.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cuboid, Point3};
use crate::placement::{FapState, NodeId};
use crate::seed;
use crate::trajectory::{sample_grid, Trajectory, Waypoint};

/// Node id used for the gateway in generated tracks.
pub const GATEWAY_NODE: NodeId = NodeId(0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlacementStrategy {
    Gwp,
    /// Three-coordinate average of the FAP positions. Reported as "max-SNR".
    FapCentroid,
    VenueCenter,
    RandomWaypoint {
        speed_min: f64,
        speed_max: f64,
        seed: u64,
    },
    /// A hand-placed position, e.g. one of a scenario's candidate positions.
    Fixed { label: String, position: Point3 },
}

impl PlacementStrategy {
    /// The random-waypoint baseline with speeds uniform in [0.5, 3] m/s.
    pub fn random_waypoint(seed: u64) -> Self {
        PlacementStrategy::RandomWaypoint {
            speed_min: 0.5,
            speed_max: 3.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PlacementStrategy::RandomWaypoint {
            speed_min,
            speed_max,
            ..
        } = self
        {
            if !(*speed_min > 0.0 && speed_min <= speed_max && speed_max.is_finite()) {
                return Err(Error::domain(format!(
                    "random waypoint speeds must satisfy 0 < min <= max, got [{speed_min}, {speed_max}]"
                )));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            PlacementStrategy::Gwp => "gwp".into(),
            PlacementStrategy::FapCentroid => "max-snr".into(),
            PlacementStrategy::VenueCenter => "venue-center".into(),
            PlacementStrategy::RandomWaypoint { .. } => "random".into(),
            PlacementStrategy::Fixed { label, .. } => label.clone(),
        }
    }
}

pub fn fap_centroid(faps: &[FapState]) -> Result<Point3> {
    centroid(faps.iter().map(|f| f.position))
}

pub(crate) fn centroid(points: impl IntoIterator<Item = Point3>) -> Result<Point3> {
    let (sum, n) = points
        .into_iter()
        .fold((Point3::default(), 0usize), |(s, n), p| (s + p, n + 1));
    if n == 0 {
        return Err(Error::domain("centroid of an empty FAP set"));
    }
    Ok(sum * (1.0 / n as f64))
}

pub fn venue_center(bounds: &Cuboid) -> Point3 {
    bounds.center()
}

/// One straight leg of random-waypoint motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub start_time: f64,
    pub end_time: f64,
    pub from: Point3,
    pub to: Point3,
    pub speed: f64,
}

impl Leg {
    fn position_at(&self, t: f64) -> Point3 {
        if self.end_time <= self.start_time {
            return self.to;
        }
        let u = ((t - self.start_time) / (self.end_time - self.start_time)).clamp(0.0, 1.0);
        self.from.lerp(&self.to, u)
    }
}

/// Endless random-waypoint legs inside `bounds`, zero pause time. The start
/// point is drawn uniformly from the venue.
pub struct RandomWaypointLegs<R: Rng> {
    bounds: Cuboid,
    speed_min: f64,
    speed_max: f64,
    rng: R,
    position: Point3,
    time: f64,
}

impl<R: Rng> RandomWaypointLegs<R> {
    pub fn new(bounds: Cuboid, speed_min: f64, speed_max: f64, mut rng: R) -> Self {
        let position = uniform_point(&bounds, &mut rng);
        RandomWaypointLegs {
            bounds,
            speed_min,
            speed_max,
            rng,
            position,
            time: 0.0,
        }
    }

    pub fn start(&self) -> Point3 {
        self.position
    }
}

impl<R: Rng> Iterator for RandomWaypointLegs<R> {
    type Item = Leg;

    fn next(&mut self) -> Option<Leg> {
        let to = uniform_point(&self.bounds, &mut self.rng);
        let speed = if self.speed_max > self.speed_min {
            self.rng.random_range(self.speed_min..=self.speed_max)
        } else {
            self.speed_min
        };
        let leg = Leg {
            start_time: self.time,
            end_time: self.time + self.position.distance(&to) / speed,
            from: self.position,
            to,
            speed,
        };
        self.time = leg.end_time;
        self.position = to;
        Some(leg)
    }
}

pub(crate) fn uniform_point(bounds: &Cuboid, rng: &mut impl Rng) -> Point3 {
    let (lo, hi) = (bounds.min(), bounds.max());
    Point3::new(
        rng.random_range(lo.x..=hi.x),
        rng.random_range(lo.y..=hi.y),
        rng.random_range(lo.z..=hi.z),
    )
}

/// Positions of the motion described by `legs` at each time in `times`
/// (ascending, starting at or after 0).
pub(crate) fn sample_legs<R: Rng>(
    mut legs: RandomWaypointLegs<R>,
    times: &[f64],
    bounds: &Cuboid,
) -> Vec<Waypoint> {
    let start = legs.start();
    let mut leg = Leg {
        start_time: 0.0,
        end_time: 0.0,
        from: start,
        to: start,
        speed: legs.speed_min,
    };
    times
        .iter()
        .map(|&t| {
            while leg.end_time < t {
                leg = legs.next().expect("legs are endless");
            }
            Waypoint {
                t,
                position: bounds.clamp(leg.position_at(t)),
            }
        })
        .collect()
}

/// Samples random-waypoint motion on the grid `0, sample_period, …, duration`.
pub fn random_waypoint_track(
    bounds: &Cuboid,
    speed_min: f64,
    speed_max: f64,
    duration: f64,
    sample_period: f64,
    seed: u64,
) -> Result<Trajectory> {
    PlacementStrategy::RandomWaypoint {
        speed_min,
        speed_max,
        seed,
    }
    .validate()?;
    if !(duration > 0.0) || !(sample_period > 0.0) {
        return Err(Error::domain("duration and sample period must be positive"));
    }
    let legs = RandomWaypointLegs::new(*bounds, speed_min, speed_max, seed::stream(seed, &[0x5257]));
    let samples = sample_legs(legs, &sample_grid(duration, sample_period), bounds);
    Trajectory::new(GATEWAY_NODE, samples)
}
