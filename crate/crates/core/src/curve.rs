//! Parametrized curves and partitions of their parameter interval.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::SpaceHandle;

/// Relative slack allowed when a parameter or knot sits on a domain endpoint.
const PARAM_SLACK: f64 = 1e-12;

/// A closed real interval `[start, end]`, possibly a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(Error::domain(format!("invalid interval [{start}, {end}]")));
        }
        Ok(Interval { start, end })
    }

    pub const UNIT: Interval = Interval {
        start: 0.0,
        end: 1.0,
    };

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    fn slack(&self) -> f64 {
        PARAM_SLACK * (1.0 + self.start.abs().max(self.end.abs()))
    }

    /// Clamps `t` into the interval, failing if it is outside by more than
    /// rounding slack.
    pub fn admit(&self, t: f64) -> Result<f64> {
        let s = self.slack();
        if !t.is_finite() || t < self.start - s || t > self.end + s {
            return Err(Error::domain(format!(
                "parameter {t} outside [{}, {}]",
                self.start, self.end
            )));
        }
        Ok(t.clamp(self.start, self.end))
    }

    /// Point at fraction `u` of the interval.
    pub fn at(&self, u: f64) -> f64 {
        if u >= 1.0 {
            self.end
        } else {
            self.start + u * self.len()
        }
    }
}

type CurveFn = dyn Fn(f64) -> Point + Send + Sync;

#[derive(Clone)]
enum Repr {
    Map(Arc<CurveFn>),
    Polyline {
        samples: Arc<[(f64, Point)]>,
        interpolate: Option<SpaceHandle>,
    },
    /// `inner` evaluated at `offset + scale * t`.
    Affine {
        inner: Arc<Curve>,
        offset: f64,
        scale: f64,
    },
    Concat(Arc<Curve>, Arc<Curve>),
}

/// A continuous path `σ: [a, b] → X`.
///
/// Curves are either a closure on their domain or a polyline of
/// `(parameter, point)` samples. Polylines are interpolated along geodesics
/// when built with [`Curve::polyline_in`] over a space that has a geodesic
/// oracle; otherwise they evaluate to the sample with the nearest parameter.
#[derive(Clone)]
pub struct Curve {
    domain: Interval,
    repr: Repr,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Map(_) => "map",
            Repr::Polyline { .. } => "polyline",
            Repr::Affine { .. } => "affine",
            Repr::Concat(..) => "concat",
        };
        f.debug_struct("Curve")
            .field("domain", &self.domain)
            .field("repr", &kind)
            .finish()
    }
}

impl Curve {
    pub fn from_fn(domain: Interval, f: impl Fn(f64) -> Point + Send + Sync + 'static) -> Self {
        Curve {
            domain,
            repr: Repr::Map(Arc::new(f)),
        }
    }

    pub fn constant(p: Point, domain: Interval) -> Self {
        Curve::from_fn(domain, move |_| p.clone())
    }

    /// Polyline evaluated at the parameter-nearest sample.
    pub fn polyline(samples: Vec<(f64, Point)>) -> Result<Self> {
        Self::build_polyline(samples, None)
    }

    /// Polyline interpolated along geodesics of `space` when it has them.
    pub fn polyline_in(space: &SpaceHandle, samples: Vec<(f64, Point)>) -> Result<Self> {
        let interp = space.capabilities().geodesic.then(|| space.clone());
        Self::build_polyline(samples, interp)
    }

    fn build_polyline(
        samples: Vec<(f64, Point)>,
        interpolate: Option<SpaceHandle>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("polyline needs at least one sample"));
        }
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::domain(
                "polyline parameters must be strictly increasing",
            ));
        }
        let domain = Interval::new(samples[0].0, samples[samples.len() - 1].0)?;
        Ok(Curve {
            domain,
            repr: Repr::Polyline {
                samples: samples.into(),
                interpolate,
            },
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Samples of a polyline curve, if this is one.
    pub fn samples(&self) -> Option<&[(f64, Point)]> {
        match &self.repr {
            Repr::Polyline { samples, .. } => Some(samples),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<Point> {
        let t = self.domain.admit(t)?;
        let p = self.eval_unchecked(t)?;
        if !p.is_finite() {
            return Err(Error::Evaluation(format!(
                "curve value at {t} is not finite"
            )));
        }
        Ok(p)
    }

    fn eval_unchecked(&self, t: f64) -> Result<Point> {
        match &self.repr {
            Repr::Map(f) => Ok(f(t)),
            Repr::Polyline {
                samples,
                interpolate,
            } => eval_polyline(samples, interpolate.as_ref(), t),
            Repr::Affine {
                inner,
                offset,
                scale,
            } => {
                let s = offset + scale * t;
                inner.eval_unchecked(s.clamp(inner.domain.start, inner.domain.end))
            }
            Repr::Concat(a, b) => {
                if t <= a.domain.end {
                    a.eval_unchecked(t.max(a.domain.start))
                } else {
                    b.eval_unchecked(t.min(b.domain.end))
                }
            }
        }
    }

    /// Evaluates at fraction `u ∈ [0, 1]` of the domain.
    pub fn eval_fraction(&self, u: f64) -> Result<Point> {
        self.eval(self.domain.at(u))
    }

    pub fn endpoints(&self) -> Result<(Point, Point)> {
        Ok((self.eval(self.domain.start)?, self.eval(self.domain.end)?))
    }

    /// `t ↦ σ(a + b − t)` on the same domain.
    pub fn reversed(&self) -> Curve {
        let Interval { start, end } = self.domain;
        Curve {
            domain: self.domain,
            repr: Repr::Affine {
                inner: Arc::new(self.clone()),
                offset: start + end,
                scale: -1.0,
            },
        }
    }

    /// Affine reparametrization onto `target`, mapping start to start.
    pub fn affine_onto(&self, target: Interval) -> Result<Curve> {
        if target == self.domain {
            return Ok(self.clone());
        }
        if self.domain.is_degenerate() {
            return Ok(Curve::constant(self.eval(self.domain.start)?, target));
        }
        if target.is_degenerate() {
            return Err(Error::Degenerate(
                "cannot map a nondegenerate domain onto a single point".into(),
            ));
        }
        let scale = self.domain.len() / target.len();
        Ok(Curve {
            domain: target,
            repr: Repr::Affine {
                inner: Arc::new(self.clone()),
                offset: self.domain.start - scale * target.start,
                scale,
            },
        })
    }

    /// Restriction to a sub-interval of the domain.
    pub fn restrict(&self, sub: Interval) -> Result<Curve> {
        self.domain.admit(sub.start)?;
        self.domain.admit(sub.end)?;
        Ok(Curve {
            domain: sub,
            repr: Repr::Affine {
                inner: Arc::new(self.clone()),
                offset: 0.0,
                scale: 1.0,
            },
        })
    }

    /// Concatenation with a curve on the adjacent domain `[b, c]` whose start
    /// coincides with this curve's end (within `tol`).
    pub fn concat(&self, next: &Curve, space: &SpaceHandle, tol: f64) -> Result<Curve> {
        if next.domain.start != self.domain.end {
            return Err(Error::domain(format!(
                "domains [{}, {}] and [{}, {}] are not adjacent",
                self.domain.start, self.domain.end, next.domain.start, next.domain.end
            )));
        }
        let gap = space.distance(&self.eval(self.domain.end)?, &next.eval(next.domain.start)?)?;
        if gap > tol {
            return Err(Error::domain(format!("curves do not meet (gap {gap:e})")));
        }
        Ok(Curve {
            domain: Interval::new(self.domain.start, next.domain.end)?,
            repr: Repr::Concat(Arc::new(self.clone()), Arc::new(next.clone())),
        })
    }
}

fn eval_polyline(
    samples: &[(f64, Point)],
    interpolate: Option<&SpaceHandle>,
    t: f64,
) -> Result<Point> {
    // First sample with parameter >= t.
    let hi = samples.partition_point(|(s, _)| *s < t);
    if hi == 0 {
        return Ok(samples[0].1.clone());
    }
    if hi == samples.len() {
        return Ok(samples[hi - 1].1.clone());
    }
    let (t0, p0) = &samples[hi - 1];
    let (t1, p1) = &samples[hi];
    if *t1 == t {
        return Ok(p1.clone());
    }
    match interpolate {
        Some(space) => space.geodesic(p0, p1)?.eval((t - t0) / (t1 - t0)),
        // Ties go to the earlier sample.
        None if t - t0 <= t1 - t => Ok(p0.clone()),
        None => Ok(p1.clone()),
    }
}

/// Strictly increasing knots spanning a curve domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::domain("partition needs at least one knot"));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(
                "partition knots must be finite and strictly increasing",
            ));
        }
        Ok(Partition { knots })
    }

    /// `2^depth` equal pieces (a single knot for degenerate domains).
    pub fn dyadic(domain: Interval, depth: u32) -> Self {
        Self::uniform(domain, 1usize << depth)
    }

    pub fn uniform(domain: Interval, pieces: usize) -> Self {
        if domain.is_degenerate() {
            return Partition {
                knots: vec![domain.start],
            };
        }
        let pieces = pieces.max(1);
        let knots = (0..=pieces)
            .map(|i| domain.at(i as f64 / pieces as f64))
            .collect();
        Partition { knots }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Bisects every piece.
    pub fn refined(&self) -> Partition {
        let mut knots = Vec::with_capacity(self.knots.len() * 2);
        for w in self.knots.windows(2) {
            knots.push(w[0]);
            knots.push(0.5 * (w[0] + w[1]));
        }
        knots.push(*self.knots.last().expect("nonempty"));
        Partition { knots }
    }

    /// Checks that the knots start and end on the domain endpoints.
    pub fn spans(&self, domain: Interval) -> Result<()> {
        let first = self.knots[0];
        let last = *self.knots.last().expect("nonempty");
        let s = domain.slack();
        if (first - domain.start).abs() > s || (last - domain.end).abs() > s {
            return Err(Error::domain(format!(
                "partition [{first}, {last}] does not span [{}, {}]",
                domain.start, domain.end
            )));
        }
        Ok(())
    }
}
