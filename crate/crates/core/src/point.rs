//! Point representations shared by all built-in spaces, and a small planar
//! vector type for comparison geometry.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A point of some metric space.
///
/// The variant used depends on the space: Euclidean and punctured-plane
/// points are coordinate vectors, circle points are angles in radians, tree
/// points sit at an offset along an edge (measured from the edge's first
/// endpoint), product points pair an inner point with a real coordinate, and
/// finite spaces use an index into their label list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Vector(Vec<f64>),
    Angle(f64),
    Tree { edge: usize, offset: f64 },
    Product(Box<Point>, f64),
    Index(usize),
}

impl Point {
    pub fn xy(x: f64, y: f64) -> Self {
        Point::Vector(vec![x, y])
    }

    pub fn vector(coords: impl Into<Vec<f64>>) -> Self {
        Point::Vector(coords.into())
    }

    pub fn product(inner: Point, t: f64) -> Self {
        Point::Product(Box::new(inner), t)
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Vector(v) => v.iter().all(|c| c.is_finite()),
            Point::Angle(a) => a.is_finite(),
            Point::Tree { offset, .. } => offset.is_finite(),
            Point::Product(inner, t) => inner.is_finite() && t.is_finite(),
            Point::Index(_) => true,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Point::Angle(a) => write!(f, "angle {a}"),
            Point::Tree { edge, offset } => write!(f, "edge {edge} @ {offset}"),
            Point::Product(inner, t) => write!(f, "[{inner}; {t}]"),
            Point::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// A point (or vector) of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ORIGIN: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Point at fraction `t` of the way from `self` to `other`.
    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }

    pub fn reflect_x(self) -> Vec2 {
        Vec2::new(self.x, -self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}
