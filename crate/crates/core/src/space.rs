//! The metric-space abstraction every check is written against.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::Point;

/// Optional oracles a space may provide beyond its distance function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Capabilities {
    pub midpoint: bool,
    pub geodesic: bool,
    pub sampler: bool,
}

/// A metric space with a mandatory distance oracle.
///
/// Optional capabilities return [`Error::Unsupported`] by default and must be
/// advertised through [`MetricSpace::capabilities`].
pub trait MetricSpace: Send + Sync + fmt::Debug {
    /// Short kind label used in messages and reports.
    fn kind(&self) -> &str;

    fn distance(&self, p: &Point, q: &Point) -> Result<f64>;

    fn capabilities(&self) -> Capabilities;

    /// Exact midpoint of `p` and `q`.
    fn midpoint(&self, _p: &Point, _q: &Point) -> Result<Point> {
        Err(self.unsupported("midpoints"))
    }

    /// Affinely parametrized geodesic from `p` to `q` on `[0, 1]`.
    fn geodesic(&self, _p: &Point, _q: &Point) -> Result<Curve> {
        Err(self.unsupported("geodesics"))
    }

    fn sample(&self, _rng: &mut StdRng) -> Result<Point> {
        Err(self.unsupported("sampling"))
    }

    /// A random point within `radius` of `center`.
    ///
    /// The default walks from `center` toward a globally sampled point along
    /// the geodesic oracle, so it needs both of those capabilities.
    fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        let caps = self.capabilities();
        if !(caps.sampler && caps.geodesic) {
            return Err(self.unsupported("local sampling"));
        }
        let target = self.sample(rng)?;
        let d = self.distance(center, &target)?;
        if d == 0.0 {
            return Ok(center.clone());
        }
        let reach = radius * rng.gen::<f64>();
        let t = (reach / d).min(1.0);
        self.geodesic(center, &target)?.eval(t)
    }

    /// Whether the space is declared complete.
    fn is_complete(&self) -> bool {
        true
    }

    /// Distance from `p` to the nearest point of the completion that is
    /// missing from the space, when the space knows it.
    fn hole_distance(&self, _p: &Point) -> Option<f64> {
        None
    }

    fn diameter_hint(&self) -> Option<f64> {
        None
    }

    /// Closed-form nearest point to `x` on the geodesic `[p, q]`, if the
    /// space has one.
    fn project_onto_geodesic(&self, _x: &Point, _p: &Point, _q: &Point) -> Option<Result<Point>> {
        None
    }

    /// Curves joining `p` to `q` that a length-space probe should try.
    /// Defaults to the geodesic when one is available.
    fn candidate_curves(&self, p: &Point, q: &Point) -> Result<Vec<Curve>> {
        if self.capabilities().geodesic {
            Ok(vec![self.geodesic(p, q)?])
        } else {
            Ok(Vec::new())
        }
    }

    #[doc(hidden)]
    fn unsupported(&self, capability: &'static str) -> Error {
        Error::Unsupported {
            space: self.kind().to_string(),
            capability,
        }
    }
}

/// Shared, immutable handle to a metric space.
#[derive(Clone)]
pub struct SpaceHandle {
    inner: Arc<dyn MetricSpace>,
}

impl fmt::Debug for SpaceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

impl SpaceHandle {
    pub fn new(space: impl MetricSpace + 'static) -> Self {
        SpaceHandle {
            inner: Arc::new(space),
        }
    }

    pub fn space(&self) -> &dyn MetricSpace {
        self.inner.as_ref()
    }

    pub fn kind(&self) -> &str {
        self.inner.kind()
    }

    pub fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    /// Distance with a finiteness check.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        let d = self.inner.distance(p, q)?;
        if !d.is_finite() || d < 0.0 {
            return Err(Error::Evaluation(format!("distance({p}, {q}) = {d}")));
        }
        Ok(d)
    }

    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        self.inner.midpoint(p, q)
    }

    pub fn geodesic(&self, p: &Point, q: &Point) -> Result<Curve> {
        self.inner.geodesic(p, q)
    }

    pub fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        self.inner.sample(rng)
    }

    pub fn sample_near(&self, center: &Point, radius: f64, rng: &mut StdRng) -> Result<Point> {
        self.inner.sample_near(center, radius, rng)
    }

    pub fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    pub fn hole_distance(&self, p: &Point) -> Option<f64> {
        self.inner.hole_distance(p)
    }

    pub fn diameter_hint(&self) -> Option<f64> {
        self.inner.diameter_hint()
    }

    pub fn project_onto_geodesic(&self, x: &Point, p: &Point, q: &Point) -> Option<Result<Point>> {
        self.inner.project_onto_geodesic(x, p, q)
    }

    pub fn candidate_curves(&self, p: &Point, q: &Point) -> Result<Vec<Curve>> {
        self.inner.candidate_curves(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{make_space, SpaceSpec};
    use rand::SeedableRng;

    #[test]
    fn default_local_sampler_stays_within_radius() {
        let e2 = make_space(&SpaceSpec::euclidean(2)).unwrap();
        let mut rng = StdRng::seed_from_u64(1);
        let c = Point::xy(0.2, -0.1);
        for _ in 0..200 {
            let p = e2.sample_near(&c, 0.05, &mut rng).unwrap();
            assert!(e2.distance(&c, &p).unwrap() <= 0.05 + 1e-12);
        }
    }

    #[test]
    fn missing_capability_is_reported() {
        let m = make_space(&SpaceSpec::DistanceMatrix {
            labels: vec!["a".into(), "b".into()],
            matrix: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        })
        .unwrap();
        let err = m.midpoint(&Point::Index(0), &Point::Index(1)).unwrap_err();
        assert!(matches!(err, Error::Unsupported { .. }));
    }
}
