use rand::rngs::StdRng;
use rand::Rng;

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace};

use super::euclidean::{ball_sample, lerp, norm_dist};

/// Radius of the ball around the origin the samplers avoid.
pub const PUNCTURE_EXCLUSION: f64 = 1e-12;

/// `R² \ {0}` with the induced Euclidean metric.
///
/// A length space that is neither complete nor geodesic: points on opposite
/// sides of the origin have no midpoint.
#[derive(Debug, Clone)]
pub struct PuncturedPlane {
    extent: f64,
}

impl PuncturedPlane {
    pub fn new(extent: f64) -> Result<Self> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(super::validation("extent > 0", vec![extent.to_string()]));
        }
        Ok(PuncturedPlane { extent })
    }

    fn coords<'a>(&self, p: &'a Point) -> Result<&'a [f64]> {
        match p {
            Point::Vector(v) if v.len() == 2 && (v[0] != 0.0 || v[1] != 0.0) => Ok(v),
            _ => Err(Error::domain(format!(
                "{p} is not a point of the punctured plane"
            ))),
        }
    }
}

impl MetricSpace for PuncturedPlane {
    fn kind(&self) -> &str {
        "punctured_plane"
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        Ok(norm_dist(self.coords(p)?, self.coords(q)?))
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            midpoint: false,
            geodesic: false,
            sampler: true,
        }
    }

    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        loop {
            let x = rng.gen_range(-self.extent..=self.extent);
            let y = rng.gen_range(-self.extent..=self.extent);
            if x.hypot(y) > PUNCTURE_EXCLUSION {
                return Ok(Point::xy(x, y));
            }
        }
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        let c = self.coords(center)?;
        loop {
            let v = ball_sample(c, radius, rng);
            if v[0].hypot(v[1]) > PUNCTURE_EXCLUSION {
                return Ok(Point::Vector(v));
            }
        }
    }

    fn is_complete(&self) -> bool {
        false
    }

    fn hole_distance(&self, p: &Point) -> Option<f64> {
        p.as_vector().map(|v| v[0].hypot(v[1]))
    }

    fn candidate_curves(&self, p: &Point, q: &Point) -> Result<Vec<Curve>> {
        let (a, b) = (self.coords(p)?, self.coords(q)?);
        // The straight segment, when it misses the origin; otherwise a family
        // of shrinking detours.
        let cross = a[0] * b[1] - a[1] * b[0];
        let dot = a[0] * b[0] + a[1] * b[1];
        if cross != 0.0 || dot > 0.0 {
            let (a, b) = (a.to_vec(), b.to_vec());
            return Ok(vec![Curve::from_fn(Interval::UNIT, move |t| {
                Point::Vector(lerp(&a, &b, t))
            })]);
        }
        [0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5]
            .into_iter()
            .map(|eps| punctured_detour(p, q, eps))
            .collect()
    }
}

/// The two-segment path `x → P_ε → y`, where `P_ε` sits at distance `ε`
/// from the origin perpendicular to the segment `[x, y]`.
pub fn punctured_detour(x: &Point, y: &Point, eps: f64) -> Result<Curve> {
    let (a, b) = match (x.as_vector(), y.as_vector()) {
        (Some(a), Some(b)) if a.len() == 2 && b.len() == 2 => (a.to_vec(), b.to_vec()),
        _ => return Err(Error::domain("detour endpoints must be planar points")),
    };
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return Err(Error::Degenerate("detour between coincident points".into()));
    }
    let apex = vec![-dy / len * eps, dx / len * eps];
    // Parametrize the corner at the fraction of the total length.
    let l1 = norm_dist(&a, &apex);
    let l2 = norm_dist(&apex, &b);
    let corner = l1 / (l1 + l2);
    Ok(Curve::from_fn(Interval::UNIT, move |t| {
        if t <= corner {
            Point::Vector(lerp(&a, &apex, t / corner))
        } else {
            Point::Vector(lerp(&apex, &b, (t - corner) / (1.0 - corner)))
        }
    }))
}
