//! Euclidean comparison triangles, comparison angles and Alexandrov angles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::{Point, Vec2};
use crate::space::SpaceHandle;
use crate::verdict::{CheckVerdict, VerdictBuilder, Witness};

/// Relative slack on the triangle inequality before lengths are rejected.
pub const EMBED_TOL: f64 = 1e-9;

/// Angle differences below this count as zero in [`alexandrov_lemma_signs`].
pub const SIGN_TOL: f64 = 1e-9;

/// Consecutive per-scale suprema closer than this count as stabilized.
pub const STABILITY_TOL: f64 = 1e-6;

/// Grid resolution per scale in [`alexandrov_angle_estimate`].
pub const ANGLE_GRID: usize = 16;

fn embedding_excess(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0) || ![a, b, c].iter().all(|s| s.is_finite()) {
        return Err(Error::domain(format!(
            "side lengths must be finite and nonnegative: {a}, {b}, {c}"
        )));
    }
    let excess = (a - b - c).max(b - a - c).max(c - a - b);
    if excess > EMBED_TOL * (1.0 + a.max(b).max(c)) {
        return Err(Error::NotEmbeddable {
            sides: [a, b, c],
            excess,
        });
    }
    Ok(excess)
}

/// Kahan's area formula, stable for needle-like triangles.
fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [p, q, r] = s;
    let prod = (p + (q + r)) * (r - (p - q)) * (r + (p - q)) * (p + (q - r));
    0.25 * prod.max(0.0).sqrt()
}

/// A planar triangle with the side lengths of a triangle in some space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTriangle {
    /// x̄, ȳ, z̄ in canonical position.
    pub vertices: [Vec2; 3],
    /// d(x, y), d(x, z), d(y, z).
    pub source_sides: [f64; 3],
}

/// Names a side by its first and second vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    XY,
    XZ,
    YZ,
}

impl ComparisonTriangle {
    pub fn x(&self) -> Vec2 {
        self.vertices[0]
    }

    pub fn y(&self) -> Vec2 {
        self.vertices[1]
    }

    pub fn z(&self) -> Vec2 {
        self.vertices[2]
    }

    pub fn side(&self, side: Side) -> (Vec2, Vec2, f64) {
        let [x, y, z] = self.vertices;
        let [a, b, c] = self.source_sides;
        match side {
            Side::XY => (x, y, a),
            Side::XZ => (x, z, b),
            Side::YZ => (y, z, c),
        }
    }
}

/// Places `x̄ = 0`, `ȳ = (a, 0)` and `z̄` in the closed upper half-plane so
/// that `|x̄ȳ| = a`, `|x̄z̄| = b`, `|ȳz̄| = c`.
pub fn build_comparison_triangle(a: f64, b: f64, c: f64) -> Result<ComparisonTriangle> {
    embedding_excess(a, b, c)?;
    let z = if a == 0.0 {
        Vec2::new(b, 0.0)
    } else {
        let zx = ((a * a + b * b) - c * c) / (2.0 * a);
        Vec2::new(zx, 2.0 * triangle_area(a, b, c) / a)
    };
    Ok(ComparisonTriangle {
        vertices: [Vec2::ORIGIN, Vec2::new(a, 0.0), z],
        source_sides: [a, b, c],
    })
}

/// The point at `arc_distance` from the first vertex of `side`.
pub fn comparison_point(tri: &ComparisonTriangle, side: Side, arc_distance: f64) -> Result<Vec2> {
    let (from, to, len) = tri.side(side);
    if !(arc_distance >= 0.0 && arc_distance <= len * (1.0 + 1e-12)) {
        return Err(Error::domain(format!(
            "arc distance {arc_distance} outside [0, {len}]"
        )));
    }
    if len == 0.0 {
        return Ok(from);
    }
    Ok(from.lerp(to, (arc_distance / len).min(1.0)))
}

/// The angle opposite `c` in a planar triangle with adjacent sides `a`, `b`.
///
/// Uses the half-angle form of the law of cosines, which agrees with the
/// clamped arccosine and keeps full accuracy near 0 and π.
pub fn comparison_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    if a == 0.0 || b == 0.0 {
        return Err(Error::UndefinedAngle(format!(
            "adjacent side of length zero ({a}, {b})"
        )));
    }
    embedding_excess(a, b, c)?;
    let num = ((c - a + b) * (c + a - b)).max(0.0).sqrt();
    let den = ((a + b - c) * (a + b + c)).max(0.0).sqrt();
    Ok((2.0 * num.atan2(den)).clamp(0.0, PI))
}

/// Scale-by-scale estimate of an Alexandrov angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub value: f64,
    pub scales_used: Vec<f64>,
    pub per_scale_sup: Vec<f64>,
    pub certified_upper: bool,
}

/// `ε_k = 2^-k` for `k = 1..=20`.
pub fn default_scales() -> Vec<f64> {
    (1..=20).map(|k| 0.5f64.powi(k)).collect()
}

/// Estimates `limsup ∠̄_p(γ1(t), γ2(t'))` as `t, t' → 0`.
///
/// Parameters are measured from the start of each domain; scales longer than
/// a domain are clamped to it. At each scale the supremum runs over a
/// 16×16 grid in `(0, ε)²`.
pub fn alexandrov_angle_estimate(
    space: &SpaceHandle,
    gamma1: &Curve,
    gamma2: &Curve,
    scales: &[f64],
) -> Result<AngleEstimate> {
    if scales.is_empty()
        || scales.iter().any(|s| !(*s > 0.0))
        || scales.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::domain(
            "scales must be positive and strictly decreasing",
        ));
    }
    let (d1, d2) = (gamma1.domain(), gamma2.domain());
    let p = gamma1.eval(d1.start)?;
    let q = gamma2.eval(d2.start)?;
    let gap = space.distance(&p, &q)?;
    if gap > 1e-9 * (1.0 + space.diameter_hint().unwrap_or(1.0)) {
        return Err(Error::domain(format!("curves start {gap:e} apart")));
    }
    let steps = (ANGLE_GRID + 1) as f64;
    let mut per_scale_sup = Vec::with_capacity(scales.len());
    for &eps in scales {
        let e1 = eps.min(d1.len());
        let e2 = eps.min(d2.len());
        let mut pts1 = Vec::with_capacity(ANGLE_GRID);
        let mut pts2 = Vec::with_capacity(ANGLE_GRID);
        for i in 1..=ANGLE_GRID {
            let a = gamma1.eval(d1.start + e1 * i as f64 / steps)?;
            let b = gamma2.eval(d2.start + e2 * i as f64 / steps)?;
            pts1.push((space.distance(&p, &a)?, a));
            pts2.push((space.distance(&p, &b)?, b));
        }
        let mut sup: Option<f64> = None;
        for (da, a) in &pts1 {
            for (db, b) in &pts2 {
                if *da == 0.0 || *db == 0.0 {
                    continue;
                }
                let angle = comparison_angle(*da, *db, space.distance(a, b)?)?;
                sup = Some(sup.map_or(angle, |s| s.max(angle)));
            }
        }
        match sup {
            Some(s) => per_scale_sup.push(s),
            None => {
                return Err(Error::UndefinedAngle(format!(
                    "a curve is constant on [0, {eps}]"
                )))
            }
        }
    }
    let value = *per_scale_sup.last().expect("nonempty scales");
    let monotone = per_scale_sup
        .windows(2)
        .all(|w| w[1] <= w[0] + STABILITY_TOL);
    let stabilized = match per_scale_sup.len() {
        1 => false,
        n => (per_scale_sup[n - 1] - per_scale_sup[n - 2]).abs() <= STABILITY_TOL,
    };
    Ok(AngleEstimate {
        value,
        scales_used: scales.to_vec(),
        per_scale_sup,
        certified_upper: monotone && stabilized,
    })
}

/// Three vertices and the sides `[x, y]`, `[y, z]`, `[z, x]`.
#[derive(Debug, Clone)]
pub struct GeodesicTriangle {
    pub vertices: [Point; 3],
    pub sides: [Curve; 3],
}

impl GeodesicTriangle {
    /// Uses the space's geodesic oracle for the sides.
    pub fn from_vertices(space: &SpaceHandle, x: Point, y: Point, z: Point) -> Result<Self> {
        let sides = [
            space.geodesic(&x, &y)?,
            space.geodesic(&y, &z)?,
            space.geodesic(&z, &x)?,
        ];
        Ok(GeodesicTriangle {
            vertices: [x, y, z],
            sides,
        })
    }

    /// The two sides leaving vertex `i`, each starting at it.
    pub fn sides_at(&self, i: usize) -> (Curve, Curve) {
        let [s0, s1, s2] = &self.sides;
        match i {
            0 => (s0.clone(), s2.reversed()),
            1 => (s1.clone(), s0.reversed()),
            _ => (s2.clone(), s1.reversed()),
        }
    }

    /// d(x, y), d(x, z), d(y, z).
    pub fn side_lengths(&self, space: &SpaceHandle) -> Result<[f64; 3]> {
        let [x, y, z] = &self.vertices;
        Ok([
            space.distance(x, y)?,
            space.distance(x, z)?,
            space.distance(y, z)?,
        ])
    }

    pub fn comparison(&self, space: &SpaceHandle) -> Result<ComparisonTriangle> {
        let [a, b, c] = self.side_lengths(space)?;
        build_comparison_triangle(a, b, c)
    }

    /// Alexandrov angle estimates at x, y and z.
    pub fn angles(&self, space: &SpaceHandle, scales: &[f64]) -> Result<[AngleEstimate; 3]> {
        let at = |i| {
            let (g1, g2) = self.sides_at(i);
            alexandrov_angle_estimate(space, &g1, &g2, scales)
        };
        Ok([at(0)?, at(1)?, at(2)?])
    }
}

/// `α + β + γ − π` from Alexandrov angle estimates.
pub fn angular_excess(space: &SpaceHandle, tri: &GeodesicTriangle, scales: &[f64]) -> Result<f64> {
    let sum: f64 = tri.angles(space, scales)?.iter().map(|a| a.value).sum();
    Ok(sum - PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64, tol: f64) -> Sign {
        if v > tol {
            Sign::Positive
        } else if v < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// The two quantities compared by Alexandrov's lemma, for `z` between `x`
/// and `y`:
/// `∠̄_x(p, y) − ∠̄_x(p, z)` and `∠̄_z(p, x) + ∠̄_z(p, y) − π`.
pub fn alexandrov_lemma_values(
    dpx: f64,
    dpy: f64,
    dpz: f64,
    dxz: f64,
    dzy: f64,
) -> Result<(f64, f64)> {
    let dxy = dxz + dzy;
    let first = comparison_angle(dpx, dxy, dpy)? - comparison_angle(dpx, dxz, dpz)?;
    let second = comparison_angle(dpz, dxz, dpx)? + comparison_angle(dpz, dzy, dpy)? - PI;
    Ok((first, second))
}

/// Signs of [`alexandrov_lemma_values`], zero within [`SIGN_TOL`].
pub fn alexandrov_lemma_signs(
    dpx: f64,
    dpy: f64,
    dpz: f64,
    dxz: f64,
    dzy: f64,
) -> Result<(Sign, Sign)> {
    let (first, second) = alexandrov_lemma_values(dpx, dpy, dpz, dxz, dzy)?;
    Ok((Sign::of(first, SIGN_TOL), Sign::of(second, SIGN_TOL)))
}

/// Checks `∠(γi, γj) ≤ ∠(γi, γk) + ∠(γk, γj)` for every ordering of three
/// curves issuing from a common point.
pub fn angle_pseudometric_check(
    space: &SpaceHandle,
    curves: [&Curve; 3],
    scales: &[f64],
    tol: f64,
) -> Result<CheckVerdict> {
    let a01 = alexandrov_angle_estimate(space, curves[0], curves[1], scales)?.value;
    let a02 = alexandrov_angle_estimate(space, curves[0], curves[2], scales)?.value;
    let a12 = alexandrov_angle_estimate(space, curves[1], curves[2], scales)?.value;
    let p = curves[0].eval(curves[0].domain().start)?;
    let mut b = VerdictBuilder::new(tol);
    for (label, lhs, r1, r2) in [
        ("angle(1,2) <= angle(1,3) + angle(3,2)", a01, a02, a12),
        ("angle(1,3) <= angle(1,2) + angle(2,3)", a02, a01, a12),
        ("angle(2,3) <= angle(2,1) + angle(1,3)", a12, a01, a02),
    ] {
        b.record(lhs - (r1 + r2), || {
            Witness::new(label, vec![p.clone()], vec![a01, a02, a12], 0.0)
        });
    }
    Ok(b.finish())
}
