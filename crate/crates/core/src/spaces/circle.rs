use std::f64::consts::{PI, TAU};

use rand::rngs::StdRng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleMetric {
    /// Straight-line distance in the ambient plane.
    Chord,
    /// Length of the shorter arc.
    Arc,
}

/// A round circle of given circumference. Points are angles in radians.
///
/// Antipodal pairs have two geodesics under the arc metric; the oracle
/// returns the counterclockwise one.
#[derive(Debug, Clone)]
pub struct Circle {
    metric: CircleMetric,
    radius: f64,
}

/// Signed angular displacement from `a` to `b` in `(-π, π]`.
pub(crate) fn signed_gap(a: f64, b: f64) -> f64 {
    let raw = b - a;
    if raw > -PI && raw <= PI {
        return raw;
    }
    let mut d = raw.rem_euclid(TAU);
    if d > PI {
        d -= TAU;
    }
    d
}

impl Circle {
    pub fn new(metric: CircleMetric, circumference: f64) -> Result<Self> {
        if !(circumference > 0.0 && circumference.is_finite()) {
            return Err(super::validation(
                "circumference > 0",
                vec![circumference.to_string()],
            ));
        }
        Ok(Circle {
            metric,
            radius: circumference / TAU,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn angle(&self, p: &Point) -> Result<f64> {
        match p {
            Point::Angle(a) if a.is_finite() => Ok(*a),
            _ => Err(Error::domain(format!("{p} is not a point of the circle"))),
        }
    }
}

impl MetricSpace for Circle {
    fn kind(&self) -> &str {
        match self.metric {
            CircleMetric::Chord => "circle(chord)",
            CircleMetric::Arc => "circle(arc)",
        }
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        let gap = signed_gap(self.angle(p)?, self.angle(q)?).abs();
        Ok(match self.metric {
            CircleMetric::Arc => self.radius * gap,
            CircleMetric::Chord => 2.0 * self.radius * (gap / 2.0).sin(),
        })
    }

    fn capabilities(&self) -> Capabilities {
        let exact = self.metric == CircleMetric::Arc;
        Capabilities {
            midpoint: exact,
            geodesic: exact,
            sampler: true,
        }
    }

    fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        if self.metric == CircleMetric::Chord {
            return Err(self.unsupported("midpoints"));
        }
        self.geodesic(p, q)?.eval(0.5)
    }

    fn geodesic(&self, p: &Point, q: &Point) -> Result<Curve> {
        if self.metric == CircleMetric::Chord {
            return Err(self.unsupported("geodesics"));
        }
        let (a, b) = (self.angle(p)?, self.angle(q)?);
        let delta = signed_gap(a, b);
        // Each half is written in the representation of its own endpoint.
        Ok(Curve::from_fn(Interval::UNIT, move |t| {
            Point::Angle(if t <= 0.5 {
                a + t * delta
            } else {
                b - (1.0 - t) * delta
            })
        }))
    }

    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        Ok(Point::Angle(rng.gen_range(0.0..TAU)))
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        let a = self.angle(center)?;
        // Keep the angular offset small enough that the chord bound also holds.
        let max_angle = match self.metric {
            CircleMetric::Arc => radius / self.radius,
            CircleMetric::Chord => {
                let s = (radius / (2.0 * self.radius)).min(1.0);
                2.0 * s.asin()
            }
        }
        .min(PI);
        Ok(Point::Angle(a + rng.gen_range(-max_angle..=max_angle)))
    }

    fn diameter_hint(&self) -> Option<f64> {
        Some(match self.metric {
            CircleMetric::Arc => PI * self.radius,
            CircleMetric::Chord => 2.0 * self.radius,
        })
    }

    fn candidate_curves(&self, p: &Point, q: &Point) -> Result<Vec<Curve>> {
        // Both arcs between the points; the shorter one is a geodesic under
        // the arc metric.
        let a = self.angle(p)?;
        let delta = signed_gap(a, self.angle(q)?);
        let other = if delta >= 0.0 {
            delta - TAU
        } else {
            delta + TAU
        };
        Ok([delta, other]
            .into_iter()
            .map(|d| Curve::from_fn(Interval::UNIT, move |t| Point::Angle(a + t * d)))
            .collect())
    }
}
