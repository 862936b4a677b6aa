use rand::rngs::StdRng;
use rand::Rng;

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace, SpaceHandle};

/// `X × R` with `d((x,t),(y,t')) = √(d(x,y)² + |t − t'|²)`.
#[derive(Debug, Clone)]
pub struct ProductWithLine {
    inner: SpaceHandle,
    extent: f64,
}

impl ProductWithLine {
    pub fn new(inner: SpaceHandle, extent: f64) -> Result<Self> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(super::validation("extent > 0", vec![extent.to_string()]));
        }
        Ok(ProductWithLine { inner, extent })
    }

    pub fn inner(&self) -> &SpaceHandle {
        &self.inner
    }

    fn split<'a>(&self, p: &'a Point) -> Result<(&'a Point, f64)> {
        match p {
            Point::Product(x, t) if t.is_finite() => Ok((x, *t)),
            _ => Err(Error::domain(format!(
                "{p} is not a point of a product with R"
            ))),
        }
    }
}

impl MetricSpace for ProductWithLine {
    fn kind(&self) -> &str {
        "product_with_line"
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        let (x, s) = self.split(p)?;
        let (y, t) = self.split(q)?;
        Ok(self.inner.distance(x, y)?.hypot(s - t))
    }

    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        let (x, s) = self.split(p)?;
        let (y, t) = self.split(q)?;
        Ok(Point::product(self.inner.midpoint(x, y)?, 0.5 * (s + t)))
    }

    fn geodesic(&self, p: &Point, q: &Point) -> Result<Curve> {
        let (x, s) = self.split(p)?;
        let (y, t) = self.split(q)?;
        let base = self.inner.geodesic(x, y)?;
        Ok(Curve::from_fn(Interval::UNIT, move |u| {
            // The inner curve shares the unit domain, so this cannot fail.
            let b = base.eval(u).expect("inner geodesic on [0, 1]");
            Point::product(b, s + u * (t - s))
        }))
    }

    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        let x = self.inner.sample(rng)?;
        Ok(Point::product(x, rng.gen_range(-self.extent..=self.extent)))
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        let (x, s) = self.split(center)?;
        // Split the radius so the product distance stays within it.
        let r = radius / std::f64::consts::SQRT_2;
        let y = self.inner.sample_near(x, r, rng)?;
        Ok(Point::product(y, s + rng.gen_range(-r..=r)))
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn diameter_hint(&self) -> Option<f64> {
        self.inner
            .diameter_hint()
            .map(|d| d.hypot(2.0 * self.extent))
    }
}
