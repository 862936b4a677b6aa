use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::comparison::{
    alexandrov_angle_estimate, build_comparison_triangle, comparison_angle, comparison_point,
    GeodesicTriangle, Side,
};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::{Point, Vec2};
use crate::space::SpaceHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlatnessKind {
    Triangle,
    Quadrilateral,
    Strip,
}

/// What to test for flatness.
#[derive(Debug, Clone)]
pub enum FlatnessInput<'a> {
    /// A triangle and the index of the vertex whose angle is compared.
    Triangle {
        triangle: &'a GeodesicTriangle,
        vertex: usize,
    },
    /// Four points `p, q, r, s` in cyclic order.
    Quadrilateral { vertices: [Point; 4] },
    /// Two geodesic lines sampled on `[−window, window]`, at most `bound` apart.
    Strip {
        gamma1: &'a Curve,
        gamma2: &'a Curve,
        window: f64,
        bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub kind: FlatnessKind,
    pub detected: bool,
    /// Largest `|d(p, q) − d(p̄, q̄)|` over the test grid.
    pub isometry_defect: f64,
    pub strip_width: Option<f64>,
}

/// Points of a hull with their planar images.
type HullSample = Vec<(Point, Vec2)>;

fn max_defect(space: &SpaceHandle, pts: &[(Point, Vec2)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = space.distance(&pts[i].0, &pts[j].0)?;
            worst = worst.max((d - pts[i].1.dist(pts[j].1)).abs());
        }
    }
    Ok(worst)
}

/// Points on geodesics from `apex` to a grid on `[b0, b1]`, mapped to the
/// planar triangle `apex_bar, b0_bar, b1_bar`.
fn fan(
    space: &SpaceHandle,
    apex: (&Point, Vec2),
    base: (&Point, Vec2),
    end: (&Point, Vec2),
    grid: usize,
) -> Result<HullSample> {
    let side = space.geodesic(base.0, end.0)?;
    let mut out = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        let u = j as f64 / (grid - 1) as f64;
        let foot = side.eval_fraction(u)?;
        let foot_bar = base.1.lerp(end.1, u);
        let ray = space.geodesic(apex.0, &foot)?;
        for i in 0..grid {
            let s = i as f64 / (grid - 1) as f64;
            out.push((ray.eval_fraction(s)?, apex.1.lerp(foot_bar, s)));
        }
    }
    Ok(out)
}

/// Detects flat triangles, quadrilaterals and strips.
///
/// Triangle: the Alexandrov angle at the chosen vertex must match its
/// comparison angle within `tol`, and the convex hull must be isometric to
/// the comparison triangle on a grid. Quadrilateral: the comparison angle
/// sum must be `2π` within `tol` and the two glued comparison triangles
/// isometric to the hull. Strip: `d(γ1(t), γ2(t))` must be constant and the
/// rectangle `(t, s) ↦ [γ1(t), γ2(t)](s)` isometric to `[−T, T] × [0, D]`.
pub fn flatness_detect(
    space: &SpaceHandle,
    input: FlatnessInput<'_>,
    grid: usize,
    scales: &[f64],
    tol: f64,
) -> Result<FlatnessReport> {
    let grid = grid.max(2);
    match input {
        FlatnessInput::Triangle { triangle, vertex } => {
            flat_triangle(space, triangle, vertex, grid, scales, tol)
        }
        FlatnessInput::Quadrilateral { vertices } => {
            flat_quadrilateral(space, &vertices, grid, tol)
        }
        FlatnessInput::Strip {
            gamma1,
            gamma2,
            window,
            bound,
        } => flat_strip(space, gamma1, gamma2, window, bound, grid, tol),
    }
}

fn flat_triangle(
    space: &SpaceHandle,
    tri: &GeodesicTriangle,
    vertex: usize,
    grid: usize,
    scales: &[f64],
    tol: f64,
) -> Result<FlatnessReport> {
    if vertex > 2 {
        return Err(Error::domain(format!(
            "vertex index {vertex} is not 0, 1 or 2"
        )));
    }
    let cmp = tri.comparison(space)?;
    let [a, b, c] = cmp.source_sides;
    let expected = match vertex {
        0 => comparison_angle(a, b, c)?,
        1 => comparison_angle(a, c, b)?,
        _ => comparison_angle(b, c, a)?,
    };
    let (g1, g2) = tri.sides_at(vertex);
    let angle = alexandrov_angle_estimate(space, &g1, &g2, scales)?.value;

    let [x, y, z] = &tri.vertices;
    // Fan from x over [y, z]; the comparison points of that side are exact.
    let ybar = comparison_point(&cmp, Side::YZ, 0.0)?;
    let zbar = comparison_point(&cmp, Side::YZ, c)?;
    let hull = fan(space, (x, cmp.x()), (y, ybar), (z, zbar), grid)?;
    let defect = max_defect(space, &hull)?;
    Ok(FlatnessReport {
        kind: FlatnessKind::Triangle,
        detected: (angle - expected).abs() <= tol && defect <= tol,
        isometry_defect: defect,
        strip_width: None,
    })
}

fn flat_quadrilateral(
    space: &SpaceHandle,
    v: &[Point; 4],
    grid: usize,
    tol: f64,
) -> Result<FlatnessReport> {
    let d = |i: usize, j: usize| space.distance(&v[i], &v[j]);
    let angle_at = |i: usize| -> Result<f64> {
        let (prev, next) = ((i + 3) % 4, (i + 1) % 4);
        comparison_angle(d(i, prev)?, d(i, next)?, d(prev, next)?)
    };
    let sum = angle_at(0)? + angle_at(1)? + angle_at(2)? + angle_at(3)?;
    if sum < 2.0 * PI - tol {
        return Err(Error::domain(format!(
            "comparison angle sum {sum} is below 2π"
        )));
    }
    let [p, q, r, s] = v;
    // Glue Δ(p, q, s) and Δ(r, q, s) along q̄ s̄.
    let qs = d(1, 3)?;
    let (qbar, sbar) = (Vec2::ORIGIN, Vec2::new(qs, 0.0));
    let pbar = build_comparison_triangle(qs, d(1, 0)?, d(3, 0)?)?.z();
    let rbar = build_comparison_triangle(qs, d(1, 2)?, d(3, 2)?)?
        .z()
        .reflect_x();
    let mut hull = fan(space, (p, pbar), (q, qbar), (s, sbar), grid)?;
    hull.extend(fan(space, (r, rbar), (q, qbar), (s, sbar), grid)?);
    let defect = max_defect(space, &hull)?;
    Ok(FlatnessReport {
        kind: FlatnessKind::Quadrilateral,
        detected: (sum - 2.0 * PI).abs() <= tol && defect <= tol,
        isometry_defect: defect,
        strip_width: None,
    })
}

fn flat_strip(
    space: &SpaceHandle,
    gamma1: &Curve,
    gamma2: &Curve,
    window: f64,
    bound: f64,
    grid: usize,
    tol: f64,
) -> Result<FlatnessReport> {
    if !(window > 0.0) {
        return Err(Error::domain("strip window must be positive"));
    }
    let ts: Vec<f64> = (0..grid)
        .map(|i| -window + 2.0 * window * i as f64 / (grid - 1) as f64)
        .collect();
    let mut rails = Vec::with_capacity(grid);
    for &t in &ts {
        let (a, b) = (gamma1.eval(t)?, gamma2.eval(t)?);
        let gap = space.distance(&a, &b)?;
        if gap > bound {
            return Err(Error::domain(format!(
                "lines are {gap} apart at t = {t}, beyond the bound {bound}"
            )));
        }
        rails.push((a, b, gap));
    }
    let width = rails[0].2;
    let spread = rails
        .iter()
        .map(|r| (r.2 - width).abs())
        .fold(0.0, f64::max);
    let speed = space.distance(&rails[0].0, &rails[grid - 1].0)? / (2.0 * window);

    let mut pts = Vec::with_capacity(grid * grid);
    for (&t, (a, b, gap)) in ts.iter().zip(&rails) {
        let rung = if *gap > 0.0 {
            Some(space.geodesic(a, b)?)
        } else {
            None
        };
        for j in 0..grid {
            let frac = j as f64 / (grid - 1) as f64;
            let p = match &rung {
                Some(g) => g.eval_fraction(frac)?,
                None => a.clone(),
            };
            pts.push((p, Vec2::new(speed * t, frac * width)));
        }
    }
    let defect = max_defect(space, &pts)?;
    Ok(FlatnessReport {
        kind: FlatnessKind::Strip,
        detected: spread <= tol && defect <= tol,
        isometry_defect: defect,
        strip_width: Some(width),
    })
}
