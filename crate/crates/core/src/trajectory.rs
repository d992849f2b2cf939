use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cuboid, Point3};
use crate::placement::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub t: f64,
    pub position: Point3,
}

/// Time-stamped positions of one node; linear between samples, held constant
/// outside the sampled interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub node: NodeId,
    samples: Vec<Waypoint>,
}

impl Trajectory {
    pub fn new(node: NodeId, samples: Vec<Waypoint>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid(format!("trajectory of node {node} has no samples")));
        }
        for (i, s) in samples.iter().enumerate() {
            if !s.t.is_finite() || !s.position.is_finite() {
                return Err(Error::invalid(format!(
                    "trajectory of node {node}: sample {i} is not finite"
                )));
            }
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(Error::invalid(format!(
                "trajectory of node {node}: time {} does not follow {}",
                w[1].t, w[0].t
            )));
        }
        Ok(Trajectory { node, samples })
    }

    /// A node parked at `position` over `[0, duration]`.
    pub fn stationary(node: NodeId, position: Point3, duration: f64) -> Result<Self> {
        let mut samples = vec![Waypoint { t: 0.0, position }];
        if duration > 0.0 {
            samples.push(Waypoint { t: duration, position });
        }
        Trajectory::new(node, samples)
    }

    pub fn samples(&self) -> &[Waypoint] {
        &self.samples
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn covers(&self, start: f64, end: f64) -> bool {
        self.start_time() <= start && self.end_time() >= end
    }

    pub fn position_at(&self, t: f64) -> Point3 {
        let s = &self.samples;
        if t <= s[0].t {
            return s[0].position;
        }
        if t >= s[s.len() - 1].t {
            return s[s.len() - 1].position;
        }
        // first sample with time > t; it exists and is > 0
        let hi = s.partition_point(|w| w.t <= t);
        let (a, b) = (&s[hi - 1], &s[hi]);
        a.position.lerp(&b.position, (t - a.t) / (b.t - a.t))
    }

    pub fn inside(&self, bounds: &Cuboid, tol: f64) -> bool {
        self.samples
            .iter()
            .all(|w| bounds.contains_with_tolerance(&w.position, tol))
    }
}

/// `0, period, 2·period, …` up to and including `duration` (within rounding).
pub fn sample_grid(duration: f64, period: f64) -> Vec<f64> {
    let n = (duration / period + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * period).collect()
}
