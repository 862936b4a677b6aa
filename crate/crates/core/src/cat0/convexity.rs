use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::stream_rng;
use crate::space::SpaceHandle;
use crate::verdict::{CheckVerdict, VerdictBuilder, Witness};

/// Checks `d(γ1(t), γ2(t)) ≤ (1 − t) d(γ1(0), γ2(0)) + t d(γ1(1), γ2(1))`
/// at `grid` evenly spaced fractions of both domains.
pub fn convexity_check(
    space: &SpaceHandle,
    gamma1: &Curve,
    gamma2: &Curve,
    grid: usize,
    tol: f64,
) -> Result<CheckVerdict> {
    let grid = grid.max(2);
    let d0 = space.distance(&gamma1.eval_fraction(0.0)?, &gamma2.eval_fraction(0.0)?)?;
    let d1 = space.distance(&gamma1.eval_fraction(1.0)?, &gamma2.eval_fraction(1.0)?)?;
    let mut b = VerdictBuilder::new(tol);
    for k in 0..grid {
        let t = k as f64 / (grid - 1) as f64;
        let (p, q) = (gamma1.eval_fraction(t)?, gamma2.eval_fraction(t)?);
        let slack = space.distance(&p, &q)? - ((1.0 - t) * d0 + t * d1);
        b.record(slack, || {
            Witness::new(
                "d(g1(t),g2(t)) convex in t",
                vec![p.clone(), q.clone()],
                vec![t],
                0.0,
            )
        });
    }
    Ok(b.finish())
}

/// The largest `δ` with `√(δ(L + δ)) ≤ ε`: the positive root of
/// `δ² + Lδ − ε² = 0`.
pub fn approx_midpoint_delta(epsilon: f64, l: f64) -> Result<f64> {
    if !(epsilon > 0.0 && l > 0.0 && epsilon.is_finite() && l.is_finite()) {
        return Err(Error::domain(format!(
            "need epsilon > 0 and L > 0, got {epsilon}, {l}"
        )));
    }
    // Rationalized to avoid cancellation for small ε.
    Ok(2.0 * epsilon * epsilon / (l + (l * l + 4.0 * epsilon * epsilon).sqrt()))
}

/// `√(δ(L + δ))`, the farthest a δ-midpoint can sit from the midpoint when
/// `d(x, y) = L`.
pub fn approx_midpoint_bound(delta: f64, l: f64) -> f64 {
    (delta * (l + delta)).sqrt()
}

/// Bisection steps toward the boundary of the δ-midpoint set.
const BOUNDARY_STEPS: usize = 60;

/// Samples δ-midpoints of `x, y` on the boundary of the δ-midpoint set and
/// checks each lies within `√(δ(L + δ)) + tol` of the midpoint, with
/// `L = d(x, y)`.
///
/// Each trial picks a direction by sampling near the midpoint `m`, then
/// bisects along `[m, w]` for the farthest point that is still a
/// δ-midpoint. The verdict's worst slack is the largest sampled distance
/// minus the bound.
pub fn approx_midpoint_closeness_check(
    space: &SpaceHandle,
    x: &Point,
    y: &Point,
    delta: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckVerdict> {
    if !(delta >= 0.0) {
        return Err(Error::domain(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    let l = space.distance(x, y)?;
    let m = space.midpoint(x, y)?;
    let bound = approx_midpoint_bound(delta, l);
    let reach = l / 2.0 + delta;
    let slop = 1e-12 * (1.0 + l);
    let is_mid = |z: &Point| -> Result<bool> {
        Ok(space.distance(x, z)?.max(space.distance(y, z)?) <= reach + slop)
    };
    let radius = 2.0 * bound + delta + tol.max(1e-9);

    let mut rng = stream_rng(seed, 0);
    let mut b = VerdictBuilder::new(tol);
    for trial in 0..trials {
        let w = space.sample_near(&m, radius, &mut rng)?;
        if space.distance(&m, &w)? == 0.0 {
            continue;
        }
        let g = space.geodesic(&m, &w)?;
        let z = if is_mid(&w)? {
            w
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..BOUNDARY_STEPS {
                let mid = 0.5 * (lo + hi);
                if is_mid(&g.eval_fraction(mid)?)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            g.eval_fraction(lo)?
        };
        let gap = space.distance(&m, &z)?;
        b.record(gap - bound, || {
            Witness::new(
                "d(m,m') <= sqrt(delta(L+delta))",
                vec![m.clone(), z.clone()],
                vec![trial as f64, gap, bound],
                0.0,
            )
        });
    }
    Ok(b.finish())
}
