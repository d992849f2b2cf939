//! Points and axis-aligned venue bounds.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        (*self - *other).norm()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Linear interpolation; `t = 0` yields `self`, `t = 1` yields `other`.
    pub fn lerp(&self, other: &Point3, t: f64) -> Point3 {
        *self + (*other - *self) * t
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl std::fmt::Display for Point3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3})", self.x, self.y, self.z)
    }
}

/// Axis-aligned cuboid. The venue is conventionally anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CuboidRepr", into = "CuboidRepr")]
pub struct Cuboid {
    min: Point3,
    max: Point3,
}

#[derive(Serialize, Deserialize)]
struct CuboidRepr {
    min: Point3,
    max: Point3,
}

impl TryFrom<CuboidRepr> for Cuboid {
    type Error = Error;
    fn try_from(r: CuboidRepr) -> Result<Self> {
        Cuboid::new(r.min, r.max)
    }
}

impl From<Cuboid> for CuboidRepr {
    fn from(c: Cuboid) -> Self {
        CuboidRepr {
            min: c.min,
            max: c.max,
        }
    }
}

impl Cuboid {
    pub fn new(min: Point3, max: Point3) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::domain("cuboid corners must be finite"));
        }
        if !(max.x > min.x && max.y > min.y && max.z > min.z) {
            return Err(Error::domain(format!(
                "cuboid max corner {max} must exceed min corner {min} on every axis"
            )));
        }
        Ok(Cuboid { min, max })
    }

    /// Venue `[0, x] × [0, y] × [0, z]`.
    pub fn from_dims(x: f64, y: f64, z: f64) -> Result<Self> {
        Cuboid::new(Point3::default(), Point3::new(x, y, z))
    }

    pub fn min(&self) -> Point3 {
        self.min
    }

    pub fn max(&self) -> Point3 {
        self.max
    }

    pub fn center(&self) -> Point3 {
        self.min.lerp(&self.max, 0.5)
    }

    pub fn diagonal(&self) -> f64 {
        self.min.distance(&self.max)
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.contains_with_tolerance(p, 0.0)
    }

    pub fn contains_with_tolerance(&self, p: &Point3, tol: f64) -> bool {
        p.x >= self.min.x - tol
            && p.x <= self.max.x + tol
            && p.y >= self.min.y - tol
            && p.y <= self.max.y + tol
            && p.z >= self.min.z - tol
            && p.z <= self.max.z + tol
    }

    pub fn clamp(&self, p: Point3) -> Point3 {
        Point3::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
            p.z.clamp(self.min.z, self.max.z),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_thin_cuboid() {
        assert!(Cuboid::from_dims(10.0, 10.0, 0.0).is_err());
        assert!(Cuboid::new(Point3::new(1.0, 0.0, 0.0), Point3::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn center_and_clamp() {
        let c = Cuboid::from_dims(80.0, 80.0, 20.0).unwrap();
        assert_eq!(c.center(), Point3::new(40.0, 40.0, 10.0));
        assert_eq!(c.clamp(Point3::new(-3.0, 90.0, 5.0)), Point3::new(0.0, 80.0, 5.0));
    }

    #[test]
    fn serde_rejects_invalid_bounds() {
        let bad = r#"{"min":{"x":0,"y":0,"z":0},"max":{"x":1,"y":0,"z":1}}"#;
        assert!(serde_json::from_str::<Cuboid>(bad).is_err());
    }
}
