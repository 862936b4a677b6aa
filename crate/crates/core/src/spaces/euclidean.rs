use rand::rngs::StdRng;
use rand::Rng;

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace};

/// `E^n` with the usual norm.
#[derive(Debug, Clone)]
pub struct Euclidean {
    n: usize,
    extent: f64,
}

impl Euclidean {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n == 0 {
            return Err(super::validation("dimension >= 1", vec![n.to_string()]));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(super::validation("extent > 0", vec![extent.to_string()]));
        }
        Ok(Euclidean { n, extent })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn coords<'a>(&self, p: &'a Point) -> Result<&'a [f64]> {
        match p {
            Point::Vector(v) if v.len() == self.n => Ok(v),
            _ => Err(Error::domain(format!("{p} is not a point of E^{}", self.n))),
        }
    }
}

pub(crate) fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub(crate) fn norm_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Nearest point to `x` on the segment `[p, q]`.
pub(crate) fn project_segment(x: &[f64], p: &[f64], q: &[f64]) -> Vec<f64> {
    let dir: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let len2: f64 = dir.iter().map(|c| c * c).sum();
    if len2 == 0.0 {
        return p.to_vec();
    }
    let t = x
        .iter()
        .zip(p)
        .zip(&dir)
        .map(|((a, b), d)| (a - b) * d)
        .sum::<f64>()
        / len2;
    lerp(p, q, t.clamp(0.0, 1.0))
}

impl MetricSpace for Euclidean {
    fn kind(&self) -> &str {
        "euclidean"
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        Ok(norm_dist(self.coords(p)?, self.coords(q)?))
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            midpoint: true,
            geodesic: true,
            sampler: true,
        }
    }

    fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        Ok(Point::Vector(lerp(self.coords(p)?, self.coords(q)?, 0.5)))
    }

    fn geodesic(&self, p: &Point, q: &Point) -> Result<Curve> {
        let a = self.coords(p)?.to_vec();
        let b = self.coords(q)?.to_vec();
        Ok(Curve::from_fn(Interval::UNIT, move |t| {
            Point::Vector(lerp(&a, &b, t))
        }))
    }

    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        Ok(Point::Vector(
            (0..self.n)
                .map(|_| rng.gen_range(-self.extent..=self.extent))
                .collect(),
        ))
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        let c = self.coords(center)?;
        Ok(Point::Vector(ball_sample(c, radius, rng)))
    }

    fn diameter_hint(&self) -> Option<f64> {
        Some(2.0 * self.extent * (self.n as f64).sqrt())
    }

    fn project_onto_geodesic(&self, x: &Point, p: &Point, q: &Point) -> Option<Result<Point>> {
        Some((|| {
            Ok(Point::Vector(project_segment(
                self.coords(x)?,
                self.coords(p)?,
                self.coords(q)?,
            )))
        })())
    }
}

/// Uniform point of the closed ball of `radius` around `c`.
pub(crate) fn ball_sample(c: &[f64], radius: f64, rng: &mut StdRng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = c.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 <= 1.0 {
            return c.iter().zip(&v).map(|(a, b)| a + radius * b).collect();
        }
    }
}
