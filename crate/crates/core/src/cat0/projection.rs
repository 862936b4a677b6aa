use rand::rngs::StdRng;
use serde::{Deserialize, Serialize};

use crate::comparison::{alexandrov_angle_estimate, default_scales};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::stream_rng;
use crate::space::SpaceHandle;

/// Set points drawn to verify a projection.
const VERIFY_SAMPLES: usize = 64;
/// Of those, how many get an angle estimate.
const ANGLE_SAMPLES: usize = 16;

/// A convex subset given by membership, sampling and optionally a
/// closed-form nearest point.
pub trait ConvexSet: Send + Sync {
    fn contains(&self, space: &SpaceHandle, p: &Point, tol: f64) -> Result<bool>;

    fn sample(&self, space: &SpaceHandle, rng: &mut StdRng) -> Result<Point>;

    /// The nearest point to `x`, when the set can compute it directly.
    fn nearest(&self, _space: &SpaceHandle, _x: &Point, _budget: usize) -> Option<Result<Point>> {
        None
    }
}

/// The geodesic segment `[p, q]`.
#[derive(Debug, Clone)]
pub struct GeodesicSegment {
    pub p: Point,
    pub q: Point,
}

impl ConvexSet for GeodesicSegment {
    fn contains(&self, space: &SpaceHandle, z: &Point, tol: f64) -> Result<bool> {
        let d = space.distance(&self.p, &self.q)?;
        Ok(space.distance(&self.p, z)? + space.distance(z, &self.q)? <= d + tol)
    }

    fn sample(&self, space: &SpaceHandle, rng: &mut StdRng) -> Result<Point> {
        use rand::Rng;
        space
            .geodesic(&self.p, &self.q)?
            .eval_fraction(rng.gen_range(0.0..=1.0))
    }

    /// The space's closed form if it has one, otherwise a coarse scan of
    /// the segment refined by golden-section search.
    fn nearest(&self, space: &SpaceHandle, x: &Point, budget: usize) -> Option<Result<Point>> {
        if let Some(r) = space.project_onto_geodesic(x, &self.p, &self.q) {
            return Some(r);
        }
        Some((|| {
            let g = space.geodesic(&self.p, &self.q)?;
            let f = |t: f64| -> Result<f64> { space.distance(x, &g.eval_fraction(t)?) };
            let coarse = (budget / 4).clamp(2, 64);
            let mut best = (0.0, f(0.0)?);
            for k in 1..=coarse {
                let t = k as f64 / coarse as f64;
                let v = f(t)?;
                if v < best.1 {
                    best = (t, v);
                }
            }
            let h = 1.0 / coarse as f64;
            let (mut a, mut b) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..budget.saturating_sub(coarse).min(200) {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if f(c)? < f(d)? {
                    b = d;
                } else {
                    a = c;
                }
            }
            g.eval_fraction(0.5 * (a + b))
        })())
    }
}

/// The closed ball `B(center, radius)`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl ConvexSet for Ball {
    fn contains(&self, space: &SpaceHandle, p: &Point, tol: f64) -> Result<bool> {
        Ok(space.distance(&self.center, p)? <= self.radius + tol)
    }

    fn sample(&self, space: &SpaceHandle, rng: &mut StdRng) -> Result<Point> {
        space.sample_near(&self.center, self.radius, rng)
    }

    /// Walks from `x` toward the center until it reaches the sphere.
    fn nearest(&self, space: &SpaceHandle, x: &Point, _budget: usize) -> Option<Result<Point>> {
        Some((|| {
            let d = space.distance(x, &self.center)?;
            if d <= self.radius {
                return Ok(x.clone());
            }
            space
                .geodesic(x, &self.center)?
                .eval_fraction((d - self.radius) / d)
        })())
    }
}

/// A nearest point of a convex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub point: Point,
    pub distance: f64,
    /// Smallest Alexandrov angle `∠_π(x)(x, y)` over sampled `y` in the set.
    /// Absent when `x` lies in the set or the space has no geodesics.
    pub angle_check: Option<f64>,
    /// No sampled set point was almost as close yet far from `point`.
    pub unique: bool,
}

fn search(
    space: &SpaceHandle,
    set: &dyn ConvexSet,
    x: &Point,
    tol: f64,
    budget: usize,
    rng: &mut StdRng,
) -> Result<Point> {
    let global = (budget / 2).max(1);
    let mut best: Option<(Point, f64)> = None;
    for _ in 0..global {
        let z = set.sample(space, rng)?;
        let d = space.distance(x, &z)?;
        if best.as_ref().is_none_or(|(_, b)| d < *b) {
            best = Some((z, d));
        }
    }
    let (mut center, mut value) = best.expect("at least one sample");
    let mut radius = value.max(tol);
    for _ in global..budget {
        if radius <= tol {
            return Ok(center);
        }
        let z = space.sample_near(&center, radius, rng)?;
        if !set.contains(space, &z, tol)? {
            radius *= 0.9;
            continue;
        }
        let d = space.distance(x, &z)?;
        if d < value {
            center = z;
            value = d;
        } else {
            radius *= 0.9;
        }
    }
    Err(Error::NoConvergence(format!(
        "projection search still moving at radius {radius:e} after {budget} evaluations"
    )))
}

/// Projects `x` onto a convex set and checks the result against samples.
///
/// Uses the set's closed form when it has one, otherwise a seeded search.
/// Verification draws set points: a strictly closer sample replaces the
/// result, `unique` fails when a sample within `tol` of the distance lies
/// farther than `√(2 D tol + tol²) + tol` from it, and `angle_check` records
/// the smallest Alexandrov angle at the projection, which is at least `π/2`
/// in a CAT(0) space.
pub fn project_to_convex(
    space: &SpaceHandle,
    set: &dyn ConvexSet,
    x: &Point,
    tol: f64,
    budget: usize,
    seed: u64,
) -> Result<ProjectionResult> {
    let mut rng = stream_rng(seed, 0);
    let mut point = match set.nearest(space, x, budget) {
        Some(p) => p?,
        None => search(space, set, x, tol, budget, &mut rng)?,
    };
    let mut distance = space.distance(x, &point)?;

    let mut verify_rng = stream_rng(seed, 1);
    let samples = (0..VERIFY_SAMPLES)
        .map(|_| set.sample(space, &mut verify_rng))
        .collect::<Result<Vec<_>>>()?;
    for y in &samples {
        let d = space.distance(x, y)?;
        if d < distance - tol {
            point = y.clone();
            distance = d;
        }
    }
    let far = (2.0 * distance * tol + tol * tol).sqrt() + tol;
    let mut unique = true;
    for y in &samples {
        if space.distance(x, y)? <= distance + tol && space.distance(&point, y)? > far {
            unique = false;
        }
    }

    let angle_check = if distance <= tol || !space.capabilities().geodesic {
        None
    } else {
        let to_x = space.geodesic(&point, x)?;
        let scales = default_scales();
        let mut min: Option<f64> = None;
        for y in samples
            .iter()
            .filter(|y| space.distance(&point, y).is_ok_and(|d| d > tol))
            .take(ANGLE_SAMPLES)
        {
            let to_y = space.geodesic(&point, y)?;
            let a = alexandrov_angle_estimate(space, &to_x, &to_y, &scales)?.value;
            min = Some(min.map_or(a, |m| m.min(a)));
        }
        min
    };
    Ok(ProjectionResult {
        point,
        distance,
        angle_check,
        unique,
    })
}
