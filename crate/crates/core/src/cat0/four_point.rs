use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comparison::build_comparison_triangle;
use crate::error::{Error, Result};
use crate::point::{Point, Vec2};
use crate::rng::stream_rng;
use crate::space::SpaceHandle;
use crate::verdict::{CheckVerdict, VerdictBuilder, Witness};

/// Samples of `|x̄1 x̄2|` tried when the explicit construction falls short.
const LINKAGE_SAMPLES: usize = 512;

/// Why no subembedding was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    /// Largest `|ȳ1 ȳ2|` reached with the four cross distances exact and
    /// `|x̄1 x̄2| ≥ d(x1, x2)`.
    pub best_y_separation: f64,
    /// `d(y1, y2)`.
    pub required: f64,
    pub reason: String,
}

/// Planar points `(x̄1, x̄2, ȳ1, ȳ2)` with `|x̄i ȳj| = d(xi, yj)`,
/// `|x̄1 x̄2| ≥ d(x1, x2)` and `|ȳ1 ȳ2| ≥ d(y1, y2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subembedding {
    pub planar_points: Option<[Vec2; 4]>,
    pub satisfied: bool,
    /// `|x̄1 x̄2| − d(x1, x2)` and `|ȳ1 ȳ2| − d(y1, y2)`.
    pub slack: [f64; 2],
    pub refutation: Option<Refutation>,
}

impl Subembedding {
    /// The larger of the two constraint violations, `≤ 0` when satisfied.
    pub fn violation(&self) -> f64 {
        -self.slack[0].min(self.slack[1])
    }
}

/// Opposite-side placement for a given `|x̄1 x̄2| = s`.
fn linkage(d11: f64, d12: f64, d21: f64, d22: f64, s: f64) -> Option<[Vec2; 4]> {
    let t1 = build_comparison_triangle(s, d11, d21).ok()?;
    let t2 = build_comparison_triangle(s, d12, d22).ok()?;
    Some([Vec2::ORIGIN, Vec2::new(s, 0.0), t1.z(), t2.z().reflect_x()])
}

/// Collinear `ỹ1, x̃2, ỹ2` with `x̃1` placed by its distances to the `ỹ`s.
fn straightened(near1: f64, near2: f64, far1: f64, far2: f64) -> Option<(Vec2, Vec2, Vec2, Vec2)> {
    let t = build_comparison_triangle(near1 + near2, far1, far2).ok()?;
    Some((
        Vec2::ORIGIN,
        Vec2::new(near1 + near2, 0.0),
        Vec2::new(near1, 0.0),
        t.z(),
    ))
}

fn measured(pts: [Vec2; 4], dx: f64, dy: f64) -> [f64; 2] {
    [pts[0].dist(pts[1]) - dx, pts[2].dist(pts[3]) - dy]
}

/// Looks for a subembedding of `(x1, x2, y1, y2)` from the six distances
/// `dij = d(xi, yj)`, `dx = d(x1, x2)`, `dy = d(y1, y2)`.
///
/// Glues the comparison triangles of `(x1, x2, y1)` and `(x1, x2, y2)` along
/// `[x̄1, x̄2]` on opposite sides. A convex quadrilateral is tested as is; a
/// reflex vertex `x̄i` is straightened onto `[ỹ1, ỹ2]`. If that falls short,
/// `|x̄1 x̄2|` is scanned over its feasible range `≥ dx`.
pub fn find_subembedding(
    d11: f64,
    d12: f64,
    d21: f64,
    d22: f64,
    dx: f64,
    dy: f64,
    tol: f64,
) -> Result<Subembedding> {
    if [d11, d12, d21, d22, dx, dy]
        .iter()
        .any(|d| !(d.is_finite() && *d >= 0.0))
    {
        return Err(Error::domain("distances must be finite and nonnegative"));
    }
    let t1 = build_comparison_triangle(dx, d11, d21)?;
    let t2 = build_comparison_triangle(dx, d12, d22)?;
    let glued = if dx == 0.0 {
        [
            Vec2::ORIGIN,
            Vec2::ORIGIN,
            Vec2::new(d11, 0.0),
            Vec2::new(-d12, 0.0),
        ]
    } else {
        [Vec2::ORIGIN, Vec2::new(dx, 0.0), t1.z(), t2.z().reflect_x()]
    };
    let [_, _, y1, y2] = glued;
    // Where [ȳ1, ȳ2] meets the x-axis decides convexity.
    let cross = if y1.y - y2.y > 0.0 {
        y1.x + (y2.x - y1.x) * y1.y / (y1.y - y2.y)
    } else {
        0.5 * (y1.x + y2.x)
    };
    let constructed = if dx == 0.0 || (0.0..=dx).contains(&cross) {
        Some(glued)
    } else if cross > dx {
        // Reflex at x̄2.
        straightened(d21, d22, d11, d12).map(|(y1, y2, x2, x1)| [x1, x2, y1, y2])
    } else {
        straightened(d11, d12, d21, d22).map(|(y1, y2, x1, x2)| [x1, x2, y1, y2])
    };

    let fits = |pts: &[Vec2; 4]| {
        let slack = measured(*pts, dx, dy);
        slack[0] >= -tol && slack[1] >= -tol
    };
    if let Some(pts) = constructed.filter(fits) {
        return Ok(Subembedding {
            planar_points: Some(pts),
            satisfied: true,
            slack: measured(pts, dx, dy),
            refutation: None,
        });
    }

    // Scan |x̄1 x̄2| over [max(dx, lo), hi] for the widest ȳ separation.
    let lo = (d11 - d21).abs().max((d12 - d22).abs()).max(dx);
    let hi = (d11 + d21).min(d12 + d22);
    let mut best: Option<[Vec2; 4]> = constructed;
    let mut best_sep = best.map_or(f64::NEG_INFINITY, |p| p[2].dist(p[3]));
    if lo <= hi {
        for k in 0..=LINKAGE_SAMPLES {
            let s = lo + (hi - lo) * k as f64 / LINKAGE_SAMPLES as f64;
            if let Some(pts) = linkage(d11, d12, d21, d22, s) {
                let sep = pts[2].dist(pts[3]);
                if sep > best_sep {
                    best_sep = sep;
                    best = Some(pts);
                }
            }
        }
    }
    if let Some(pts) = best.filter(fits) {
        return Ok(Subembedding {
            planar_points: Some(pts),
            satisfied: true,
            slack: measured(pts, dx, dy),
            refutation: None,
        });
    }
    let reason = if lo > hi + tol {
        format!("d(x1,x2) = {dx} exceeds the largest placement {hi}")
    } else {
        format!("|y1' y2'| reaches at most {best_sep} < d(y1,y2) = {dy}")
    };
    Ok(Subembedding {
        planar_points: None,
        satisfied: false,
        slack: match best {
            Some(pts) => measured(pts, dx, dy),
            None => [hi - dx, -dy],
        },
        refutation: Some(Refutation {
            best_y_separation: best_sep,
            required: dy,
            reason,
        }),
    })
}

/// The three ways to split four points into `(x1, x2 | y1, y2)`.
pub const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// Runs [`find_subembedding`] on the three pairings of four points.
pub fn quadruple_check(
    space: &SpaceHandle,
    pts: &[Point; 4],
    tol: f64,
) -> Result<Vec<Subembedding>> {
    let d = |i: usize, j: usize| space.distance(&pts[i], &pts[j]);
    PAIRINGS
        .iter()
        .map(|&[x1, x2, y1, y2]| {
            find_subembedding(
                d(x1, y1)?,
                d(x1, y2)?,
                d(x2, y1)?,
                d(x2, y2)?,
                d(x1, x2)?,
                d(y1, y2)?,
                tol,
            )
        })
        .collect()
}

/// Draws `count` quadruples and checks every pairing for a subembedding.
///
/// Quadruple `k` uses its own random stream, so the verdict does not
/// depend on how the work is split across threads.
pub fn four_point_scan(
    space: &SpaceHandle,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<CheckVerdict> {
    let builders = (0..count)
        .into_par_iter()
        .map(|k| -> Result<VerdictBuilder> {
            let mut rng = stream_rng(seed, k as u64);
            let pts = [
                space.sample(&mut rng)?,
                space.sample(&mut rng)?,
                space.sample(&mut rng)?,
                space.sample(&mut rng)?,
            ];
            let mut b = VerdictBuilder::new(tol);
            for (pairing, sub) in PAIRINGS.iter().zip(quadruple_check(space, &pts, tol)?) {
                let order: Vec<Point> = pairing.iter().map(|&i| pts[i].clone()).collect();
                let excess = sub.violation();
                b.record(excess, || {
                    Witness::new("subembedding (x1,x2|y1,y2)", order, sub.slack.to_vec(), 0.0)
                });
            }
            Ok(b)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = VerdictBuilder::new(tol);
    for b in builders {
        total.merge(b);
    }
    Ok(total.finish())
}
