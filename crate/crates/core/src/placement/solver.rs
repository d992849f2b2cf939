//! Minimisation of `g(p) = max_i (|p - c_i| - r_i)` over a cuboid.
//!
//! `g` is a maximum of convex functions, so it is convex but not smooth:
//! coordinate-wise search stalls on the ridges where two terms are equal.
//! The minimiser here is a central-cut ellipsoid method, which only needs a
//! subgradient per step and carries a certified lower bound on the optimum.
//! Seed points (ball centres, pairwise midpoints, the venue centre) prime the
//! incumbent.

use crate::geometry::{Cuboid, Point3};

const DIM: f64 = 3.0;
const MAX_ITERATIONS: usize = 20_000;

/// A ball `|p - center| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Point3,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcessOptimum {
    pub point: Point3,
    /// `g` at `point`.
    pub value: f64,
    /// Certified lower bound on `min g` over the cuboid.
    pub lower_bound: f64,
}

/// `g(p)` and the index of the term attaining it.
pub fn max_excess(p: &Point3, balls: &[Ball]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, b) in balls.iter().enumerate() {
        let e = p.distance(&b.center) - b.radius;
        if e > best.0 {
            best = (e, i);
        }
    }
    best
}

type Mat3 = [[f64; 3]; 3];

fn mat_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Ellipsoid {
    center: [f64; 3],
    shape: Mat3,
}

impl Ellipsoid {
    fn ball(center: Point3, radius: f64) -> Self {
        let r2 = radius * radius;
        Ellipsoid {
            center: center.to_array(),
            shape: [[r2, 0.0, 0.0], [0.0, r2, 0.0], [0.0, 0.0, r2]],
        }
    }

    /// Half-width of the ellipsoid along `a`, i.e. `sqrt(aᵀ P a)`.
    fn width(&self, a: &[f64; 3]) -> f64 {
        dot(a, &mat_vec(&self.shape, a)).max(0.0).sqrt()
    }

    /// Keeps the half `{y : aᵀ(y - center) <= 0}`.
    fn cut(&mut self, a: &[f64; 3]) -> bool {
        let pa = mat_vec(&self.shape, a);
        let w2 = dot(a, &pa);
        if !(w2 > 0.0) || !w2.is_finite() {
            return false;
        }
        let w = w2.sqrt();
        let b = [pa[0] / w, pa[1] / w, pa[2] / w];
        for (c, bk) in self.center.iter_mut().zip(b) {
            *c -= bk / (DIM + 1.0);
        }
        let scale = DIM * DIM / (DIM * DIM - 1.0);
        let shrink = 2.0 / (DIM + 1.0);
        for r in 0..3 {
            for c in 0..3 {
                self.shape[r][c] = scale * (self.shape[r][c] - shrink * b[r] * b[c]);
            }
        }
        // keep symmetric against rounding drift
        for r in 0..3 {
            for c in (r + 1)..3 {
                let m = 0.5 * (self.shape[r][c] + self.shape[c][r]);
                self.shape[r][c] = m;
                self.shape[c][r] = m;
            }
        }
        true
    }
}

/// Minimises `g` over `bounds` to an absolute accuracy of `tolerance`.
///
/// When `stop_above` is set the search returns as soon as the certified lower
/// bound exceeds it; the point is then the best one seen so far.
pub fn minimize_max_excess(
    balls: &[Ball],
    bounds: &Cuboid,
    tolerance: f64,
    stop_above: Option<f64>,
) -> ExcessOptimum {
    assert!(!balls.is_empty(), "at least one ball is required");

    let mut best_point = bounds.center();
    let mut best_value = max_excess(&best_point, balls).0;
    let consider = |p: Point3, best_point: &mut Point3, best_value: &mut f64| {
        let v = max_excess(&p, balls).0;
        if v < *best_value {
            *best_value = v;
            *best_point = p;
        }
    };
    for (i, a) in balls.iter().enumerate() {
        consider(bounds.clamp(a.center), &mut best_point, &mut best_value);
        for b in &balls[i + 1..] {
            let mid = a.center.lerp(&b.center, 0.5);
            consider(bounds.clamp(mid), &mut best_point, &mut best_value);
        }
    }

    let mut lower_bound = f64::NEG_INFINITY;
    let mut ell = Ellipsoid::ball(bounds.center(), 0.5 * bounds.diagonal() * (1.0 + 1e-9));
    let lo = bounds.min().to_array();
    let hi = bounds.max().to_array();

    for _ in 0..MAX_ITERATIONS {
        if best_value - lower_bound <= tolerance {
            break;
        }
        if stop_above.is_some_and(|s| lower_bound > s) {
            break;
        }
        let x = ell.center;

        // Feasibility cut on the most violated face.
        let mut violation = 0.0;
        let mut normal = [0.0; 3];
        for k in 0..3 {
            if x[k] - hi[k] > violation {
                violation = x[k] - hi[k];
                normal = [0.0; 3];
                normal[k] = 1.0;
            }
            if lo[k] - x[k] > violation {
                violation = lo[k] - x[k];
                normal = [0.0; 3];
                normal[k] = -1.0;
            }
        }
        if violation > 0.0 {
            if !ell.cut(&normal) {
                break;
            }
            continue;
        }

        let p = Point3::from_array(x);
        let (value, active) = max_excess(&p, balls);
        if value < best_value {
            best_value = value;
            best_point = p;
        }
        let offset = p - balls[active].center;
        let dist = offset.norm();
        if dist == 0.0 {
            // zero is a subgradient: p is a global minimiser
            lower_bound = value;
            break;
        }
        let s = (offset * (1.0 / dist)).to_array();
        lower_bound = lower_bound.max(value - ell.width(&s));
        if !ell.cut(&s) {
            break;
        }
    }

    ExcessOptimum {
        point: best_point,
        value: best_value,
        lower_bound: lower_bound.min(best_value),
    }
}
