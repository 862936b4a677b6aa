//! Geodesic verification and construction from ε-midpoints.

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{split_seed, stream_rng};
use crate::space::SpaceHandle;

/// Absolute slack on the Lipschitz certificate of [`dyadic_geodesic`],
/// scaled by `1 + d(x, y) + ε`.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicMode {
    Global,
    /// Only parameter pairs at most `window` apart are tested.
    Local {
        window: f64,
    },
}

/// Result of a constant-speed test.
#[derive(Debug, Clone)]
pub struct GeodesicWitness {
    pub curve: Curve,
    /// Estimated speed λ.
    pub speed: f64,
    /// Worst `|d(γ(t), γ(t')) − λ|t − t'||` over tested pairs.
    pub max_deviation: f64,
    pub mode: GeodesicMode,
    pub worst_pair: Option<(f64, f64)>,
    pub certified: bool,
}

/// Tests `d(γ(t), γ(t')) = λ|t − t'|` on a uniform grid of `grid_size`
/// parameters.
///
/// In global mode λ is `d(endpoints) / |domain|` and every pair is tested.
/// In local mode λ is the mean speed over adjacent grid points and only pairs
/// within the window are tested.
pub fn is_geodesic(
    space: &SpaceHandle,
    curve: &Curve,
    grid_size: usize,
    tol: f64,
    mode: GeodesicMode,
) -> Result<GeodesicWitness> {
    if grid_size < 2 {
        return Err(Error::domain("geodesic grid needs at least two points"));
    }
    let domain = curve.domain();
    let params: Vec<f64> = (0..grid_size)
        .map(|i| domain.at(i as f64 / (grid_size - 1) as f64))
        .collect();
    let points = params
        .iter()
        .map(|&t| curve.eval(t))
        .collect::<Result<Vec<_>>>()?;

    let speed = match mode {
        _ if domain.is_degenerate() => 0.0,
        GeodesicMode::Global => space.distance(&points[0], &points[grid_size - 1])? / domain.len(),
        GeodesicMode::Local { window } => {
            let h = domain.len() / (grid_size - 1) as f64;
            if window < h * (1.0 - 1e-12) {
                return Err(Error::domain(format!(
                    "window {window} is narrower than the grid spacing {h}"
                )));
            }
            let mut total = 0.0;
            for w in points.windows(2) {
                total += space.distance(&w[0], &w[1])?;
            }
            total / domain.len()
        }
    };

    let mut max_deviation = 0.0f64;
    let mut worst_pair = None;
    for i in 0..grid_size {
        for j in i + 1..grid_size {
            let gap = params[j] - params[i];
            if let GeodesicMode::Local { window } = mode {
                if gap > window * (1.0 + 1e-12) {
                    break;
                }
            }
            let dev = (space.distance(&points[i], &points[j])? - speed * gap).abs();
            if dev > max_deviation {
                max_deviation = dev;
                worst_pair = Some((params[i], params[j]));
            }
        }
    }
    Ok(GeodesicWitness {
        curve: curve.clone(),
        speed,
        max_deviation,
        mode,
        worst_pair,
        certified: max_deviation <= tol,
    })
}

/// Where an ε-midpoint came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MidpointSource {
    Oracle,
    Geodesic,
    Search { evaluations: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MidpointResult {
    pub point: Point,
    /// `max(d(x, z), d(y, z)) − d(x, y)/2`, clamped at zero.
    pub epsilon: f64,
    pub source: MidpointSource,
}

fn achieved(space: &SpaceHandle, x: &Point, y: &Point, half: f64, z: &Point) -> Result<f64> {
    Ok((space.distance(x, z)?.max(space.distance(y, z)?) - half).max(0.0))
}

/// Finds `z` with `d(x, z), d(y, z) ≤ d(x, y)/2 + ε`.
///
/// Prefers the midpoint oracle, then the geodesic oracle's midpoint. Without
/// either, takes the balance points of the space's candidate curves, then
/// searches: half the remaining budget on global samples, the rest on a
/// seeded (1+1) local search around the best candidate when the space can
/// sample locally. The first candidate meeting the bound is returned; it is
/// also the best seen so far. `ε = 0` requires an oracle.
pub fn find_epsilon_midpoint(
    space: &SpaceHandle,
    x: &Point,
    y: &Point,
    epsilon: f64,
    budget: usize,
    seed: u64,
) -> Result<MidpointResult> {
    if !(epsilon >= 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let caps = space.capabilities();
    let half = 0.5 * space.distance(x, y)?;
    if caps.midpoint || caps.geodesic {
        let (point, source) = if caps.midpoint {
            (space.midpoint(x, y)?, MidpointSource::Oracle)
        } else {
            (space.geodesic(x, y)?.eval(0.5)?, MidpointSource::Geodesic)
        };
        let epsilon = achieved(space, x, y, half, &point)?;
        return Ok(MidpointResult {
            point,
            epsilon,
            source,
        });
    }
    if epsilon == 0.0 {
        return Err(Error::Unsupported {
            space: space.kind().to_string(),
            capability: "exact midpoints",
        });
    }
    if !caps.sampler {
        return Err(Error::Unsupported {
            space: space.kind().to_string(),
            capability: "sampling",
        });
    }

    let mut best: Option<(Point, f64)> = None;
    let mut evaluations = 0;
    let found = |p: Point, e: f64, evaluations: usize| MidpointResult {
        point: p,
        epsilon: e,
        source: MidpointSource::Search { evaluations },
    };

    // The balance point of a curve of length L is an ((L - d) / 2)-midpoint.
    for curve in space.candidate_curves(x, y)? {
        let (z, evals) = balance_point(space, x, y, &curve)?;
        let e = achieved(space, x, y, half, &z)?;
        evaluations += evals;
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((z, e));
        }
    }
    if let Some((z, e)) = &best {
        if *e <= epsilon {
            return Ok(found(z.clone(), *e, evaluations));
        }
    }

    let mut rng = stream_rng(seed, 0);

    let global = evaluations + (budget.saturating_sub(evaluations) / 2).max(1);
    while evaluations < global {
        let z = space.sample(&mut rng)?;
        let e = achieved(space, x, y, half, &z)?;
        evaluations += 1;
        if e <= epsilon {
            return Ok(found(z, e, evaluations));
        }
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((z, e));
        }
    }

    let (mut center, mut center_eps) = best.expect("at least one global sample");
    let mut radius = (center_eps * (2.0 * half).max(center_eps)).sqrt() + center_eps;
    while evaluations < budget {
        let z = match space.sample_near(&center, radius, &mut rng) {
            Ok(z) => z,
            Err(Error::Unsupported { .. }) => break,
            Err(e) => return Err(e),
        };
        let e = achieved(space, x, y, half, &z)?;
        evaluations += 1;
        if e <= epsilon {
            return Ok(found(z, e, evaluations));
        }
        if e < center_eps {
            center = z;
            center_eps = e;
            radius *= 1.5;
        } else {
            radius *= 0.92;
        }
    }
    Err(Error::MidpointNotFound {
        x: x.clone(),
        y: y.clone(),
        epsilon,
        best_achieved: center_eps,
    })
}

/// Bisects for the parameter where `d(x, γ(t)) = d(y, γ(t))`.
fn balance_point(
    space: &SpaceHandle,
    x: &Point,
    y: &Point,
    curve: &Curve,
) -> Result<(Point, usize)> {
    let dom = curve.domain();
    let (mut lo, mut hi) = (dom.start, dom.end);
    let mut evals = 0;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let z = curve.eval(mid)?;
        evals += 1;
        if space.distance(x, &z)? < space.distance(y, &z)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((curve.eval(0.5 * (lo + hi))?, evals))
}

/// Builds `σ` on the dyadic grid `k / 2^depth` by recursive ε_n-midpoints,
/// `ε_n = ε / 4^n`, and certifies `d(σ(t), σ(t')) ≤ (d(x, y) + ε)|t − t'|`
/// on every grid pair before returning.
///
/// The result is a polyline that evaluates off-grid parameters at the
/// nearest grid point.
pub fn dyadic_geodesic(
    space: &SpaceHandle,
    x: &Point,
    y: &Point,
    depth: u32,
    epsilon_total: f64,
    budget: usize,
    seed: u64,
) -> Result<Curve> {
    if depth == 0 || depth > 24 {
        return Err(Error::domain(format!(
            "depth must be in 1..=24, got {depth}"
        )));
    }
    if !(epsilon_total > 0.0) {
        return Err(Error::domain("epsilon_total must be positive"));
    }
    let n = 1usize << depth;
    let mut points: Vec<Option<Point>> = vec![None; n + 1];
    points[0] = Some(x.clone());
    points[n] = Some(y.clone());
    for level in 1..=depth {
        let step = n >> level;
        let eps = epsilon_total / 4f64.powi(level as i32);
        for k in (1..(1usize << level)).step_by(2) {
            let idx = k * step;
            let left = points[idx - step].as_ref().expect("coarser level filled");
            let right = points[idx + step].as_ref().expect("coarser level filled");
            let m = find_epsilon_midpoint(
                space,
                left,
                right,
                eps,
                budget,
                split_seed(seed, idx as u64),
            )?;
            points[idx] = Some(m.point);
        }
    }
    let points: Vec<Point> = points
        .into_iter()
        .map(|p| p.expect("grid filled"))
        .collect();

    let bound = space.distance(x, y)? + epsilon_total;
    let slack = LIPSCHITZ_SLACK * (1.0 + bound);
    for i in 0..=n {
        for j in i + 1..=n {
            let d = space.distance(&points[i], &points[j])?;
            let allowed = bound * (j - i) as f64 / n as f64;
            if d > allowed + slack {
                return Err(Error::Certificate(format!(
                    "d(σ({i}/{n}), σ({j}/{n})) = {d} exceeds {allowed}"
                )));
            }
        }
    }
    let samples = points
        .into_iter()
        .enumerate()
        .map(|(k, p)| (k as f64 / n as f64, p))
        .collect();
    Curve::polyline(samples)
}

/// Follows ε_j-midpoints along a decreasing schedule until two consecutive
/// ones are within `tol / 2`, then verifies the last as a midpoint.
///
/// Fails with [`Error::NoConvergence`] if the schedule runs out first, and
/// with [`Error::Incomplete`] if the sequence settles but its last term is
/// not a midpoint within `tol` or lies within `tol` of a hole in the space.
pub fn midpoint_limit(
    space: &SpaceHandle,
    x: &Point,
    y: &Point,
    schedule: &[f64],
    tol: f64,
    budget: usize,
    seed: u64,
) -> Result<MidpointResult> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::domain("schedule must be nonempty and nonincreasing"));
    }
    let cauchy_tol = 0.5 * tol;
    let mut prev: Option<MidpointResult> = None;
    for (j, &eps) in schedule.iter().enumerate() {
        let m = find_epsilon_midpoint(space, x, y, eps, budget, split_seed(seed, j as u64))?;
        if let Some(p) = &prev {
            if space.distance(&p.point, &m.point)? <= cauchy_tol {
                if m.epsilon > tol {
                    return Err(Error::Incomplete {
                        reason: format!("limit candidate is only a {:e}-midpoint", m.epsilon),
                        candidate: m.point,
                    });
                }
                if let Some(h) = space.hole_distance(&m.point) {
                    if h <= tol {
                        return Err(Error::Incomplete {
                            reason: format!(
                                "midpoints converge to a point missing from the space (gap {h:e})"
                            ),
                            candidate: m.point,
                        });
                    }
                }
                return Ok(m);
            }
        }
        prev = Some(m);
    }
    Err(Error::NoConvergence(format!(
        "{} midpoints did not settle within {cauchy_tol:e}",
        schedule.len()
    )))
}

/// Affinely reparametrizes a geodesic onto `target`. With
/// `target = [0, d(endpoints)]` the result has unit speed.
pub fn unit_reparametrize(space: &SpaceHandle, curve: &Curve, target: Interval) -> Result<Curve> {
    let (a, b) = curve.endpoints()?;
    if !target.is_degenerate() && (curve.domain().is_degenerate() || space.distance(&a, &b)? == 0.0)
    {
        return Err(Error::Degenerate(
            "zero-length curve cannot be spread over a nondegenerate domain".into(),
        ));
    }
    curve.affine_onto(target)
}

/// [`unit_reparametrize`] onto `[0, d(endpoints)]`.
pub fn to_unit_speed(space: &SpaceHandle, curve: &Curve) -> Result<Curve> {
    let (a, b) = curve.endpoints()?;
    let d = space.distance(&a, &b)?;
    unit_reparametrize(space, curve, Interval::new(0.0, d)?)
}
