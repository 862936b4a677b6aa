use rand::rngs::StdRng;
use rand::Rng;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace};

/// Relative tolerance for the axiom checks at load time.
const AXIOM_TOL: f64 = 1e-12;

/// A finite metric space given by its distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    /// Validates symmetry, the zero diagonal, nonnegativity and every
    /// triangle inequality.
    pub fn new(labels: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(super::validation("at least one point", vec![]));
        }
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(super::validation(
                "square matrix matching labels",
                vec![format!("{n} labels")],
            ));
        }
        let scale = d.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = AXIOM_TOL * (1.0 + scale);
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(super::validation("zero diagonal", vec![labels[i].clone()]));
            }
            for j in 0..n {
                if !(d[i][j].is_finite() && d[i][j] >= 0.0) {
                    return Err(super::validation(
                        "finite nonnegative distances",
                        vec![labels[i].clone(), labels[j].clone()],
                    ));
                }
                if (d[i][j] - d[j][i]).abs() > tol {
                    return Err(super::validation(
                        "symmetry",
                        vec![labels[i].clone(), labels[j].clone()],
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j] + d[j][k] + tol {
                        return Err(super::validation(
                            "triangle inequality",
                            vec![labels[i].clone(), labels[j].clone(), labels[k].clone()],
                        ));
                    }
                }
            }
        }
        Ok(DistanceMatrix { labels, d })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn index(&self, p: &Point) -> Result<usize> {
        match *p {
            Point::Index(i) if i < self.labels.len() => Ok(i),
            _ => Err(Error::domain(format!(
                "{p} is not a point of this finite space"
            ))),
        }
    }
}

impl MetricSpace for DistanceMatrix {
    fn kind(&self) -> &str {
        "distance_matrix"
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        Ok(self.d[self.index(p)?][self.index(q)?])
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            midpoint: false,
            geodesic: false,
            sampler: true,
        }
    }

    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        Ok(Point::Index(rng.gen_range(0..self.labels.len())))
    }

    fn diameter_hint(&self) -> Option<f64> {
        Some(self.d.iter().flatten().fold(0.0, |m: f64, v| m.max(*v)))
    }
}
