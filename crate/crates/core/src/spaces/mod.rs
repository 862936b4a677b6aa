//! Reference spaces with closed-form oracles.
//!
//! | kind | midpoint | geodesic | sampler | complete |
//! |------|----------|----------|---------|----------|
//! | `euclidean` | yes | yes | yes | yes |
//! | `circle` (arc) | yes | yes | yes | yes |
//! | `circle` (chord) | no | no | yes | yes |
//! | `punctured_plane` | no | no | yes | no |
//! | `metric_tree` | yes | yes | yes | yes |
//! | `product_with_line` | as inner | as inner | as inner | as inner |
//! | `distance_matrix` | no | no | yes | yes |

mod circle;
mod euclidean;
mod matrix;
mod product;
mod punctured;
mod tree;

use serde::{Deserialize, Serialize};

pub use circle::{Circle, CircleMetric};
pub use euclidean::Euclidean;
pub use matrix::DistanceMatrix;
pub use product::ProductWithLine;
pub use punctured::{punctured_detour, PuncturedPlane, PUNCTURE_EXCLUSION};
pub use tree::{random_tree_edges, MetricTree, TreeEdge};

use crate::error::Result;
use crate::space::SpaceHandle;

fn default_extent() -> f64 {
    1.0
}

/// Serializable description of a built-in space.
///
/// `extent` bounds the region the sampler draws from (a cube of half-width
/// `extent` for planes, the line coordinate range for products).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Euclidean {
        n: usize,
        #[serde(default = "default_extent")]
        extent: f64,
    },
    Circle {
        metric: CircleMetric,
        circumference: f64,
    },
    PuncturedPlane {
        #[serde(default = "default_extent")]
        extent: f64,
    },
    MetricTree {
        edges: Vec<TreeEdge>,
    },
    ProductWithLine {
        inner: Box<SpaceSpec>,
        #[serde(default = "default_extent")]
        extent: f64,
    },
    DistanceMatrix {
        labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
    },
}

impl SpaceSpec {
    pub fn euclidean(n: usize) -> Self {
        SpaceSpec::Euclidean { n, extent: 1.0 }
    }

    pub fn circle(metric: CircleMetric, circumference: f64) -> Self {
        SpaceSpec::Circle {
            metric,
            circumference,
        }
    }

    pub fn punctured_plane() -> Self {
        SpaceSpec::PuncturedPlane { extent: 1.0 }
    }

    /// Three unit edges `o–a`, `o–b`, `o–c`.
    pub fn tripod() -> Self {
        SpaceSpec::MetricTree {
            edges: vec![
                TreeEdge::new("o", "a", 1.0),
                TreeEdge::new("o", "b", 1.0),
                TreeEdge::new("o", "c", 1.0),
            ],
        }
    }

    pub fn product_with_line(inner: SpaceSpec, extent: f64) -> Self {
        SpaceSpec::ProductWithLine {
            inner: Box::new(inner),
            extent,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpaceSpec::Euclidean { .. } => "euclidean",
            SpaceSpec::Circle { .. } => "circle",
            SpaceSpec::PuncturedPlane { .. } => "punctured_plane",
            SpaceSpec::MetricTree { .. } => "metric_tree",
            SpaceSpec::ProductWithLine { .. } => "product_with_line",
            SpaceSpec::DistanceMatrix { .. } => "distance_matrix",
        }
    }
}

/// Validates `spec` and builds the corresponding space.
pub fn make_space(spec: &SpaceSpec) -> Result<SpaceHandle> {
    Ok(match spec {
        SpaceSpec::Euclidean { n, extent } => SpaceHandle::new(Euclidean::new(*n, *extent)?),
        SpaceSpec::Circle {
            metric,
            circumference,
        } => SpaceHandle::new(Circle::new(*metric, *circumference)?),
        SpaceSpec::PuncturedPlane { extent } => SpaceHandle::new(PuncturedPlane::new(*extent)?),
        SpaceSpec::MetricTree { edges } => SpaceHandle::new(MetricTree::new(edges)?),
        SpaceSpec::ProductWithLine { inner, extent } => {
            SpaceHandle::new(ProductWithLine::new(make_space(inner)?, *extent)?)
        }
        SpaceSpec::DistanceMatrix { labels, matrix } => {
            SpaceHandle::new(DistanceMatrix::new(labels.clone(), matrix.clone())?)
        }
    })
}

pub(crate) fn validation(axiom: &str, witness: Vec<String>) -> crate::error::Error {
    crate::error::Error::Validation {
        axiom: axiom.to_string(),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;
    use crate::rng::stream_rng;
    use std::f64::consts::PI;

    fn all_samplable() -> Vec<SpaceSpec> {
        vec![
            SpaceSpec::euclidean(2),
            SpaceSpec::euclidean(3),
            SpaceSpec::circle(CircleMetric::Arc, 2.0 * PI),
            SpaceSpec::circle(CircleMetric::Chord, 2.0 * PI),
            SpaceSpec::punctured_plane(),
            SpaceSpec::tripod(),
            SpaceSpec::product_with_line(SpaceSpec::tripod(), 2.0),
            SpaceSpec::MetricTree {
                edges: random_tree_edges(&mut stream_rng(3, 0), 20),
            },
        ]
    }

    #[test]
    fn every_space_satisfies_metric_axioms_on_samples() {
        for spec in all_samplable() {
            let space = make_space(&spec).unwrap();
            let mut rng = stream_rng(11, 0);
            for _ in 0..10_000 {
                let x = space.sample(&mut rng).unwrap();
                let y = space.sample(&mut rng).unwrap();
                let z = space.sample(&mut rng).unwrap();
                let dxy = space.distance(&x, &y).unwrap();
                let dyz = space.distance(&y, &z).unwrap();
                let dxz = space.distance(&x, &z).unwrap();
                assert_eq!(space.distance(&x, &x).unwrap(), 0.0, "{spec:?}");
                assert!(
                    (dxy - space.distance(&y, &x).unwrap()).abs() < 1e-12,
                    "{spec:?}"
                );
                assert!(dxz <= dxy + dyz + 1e-12, "{spec:?}: {x} {y} {z}");
            }
        }
    }

    #[test]
    fn midpoint_oracles_are_exact() {
        for spec in all_samplable() {
            let space = make_space(&spec).unwrap();
            if !space.capabilities().midpoint {
                continue;
            }
            let mut rng = stream_rng(5, 1);
            for _ in 0..500 {
                let x = space.sample(&mut rng).unwrap();
                let y = space.sample(&mut rng).unwrap();
                let m = space.midpoint(&x, &y).unwrap();
                let d = space.distance(&x, &y).unwrap();
                assert!(
                    (space.distance(&x, &m).unwrap() - d / 2.0).abs() < 1e-12,
                    "{spec:?}"
                );
                assert!(
                    (space.distance(&m, &y).unwrap() - d / 2.0).abs() < 1e-12,
                    "{spec:?}"
                );
            }
        }
    }

    #[test]
    fn geodesic_oracles_have_constant_speed() {
        for spec in all_samplable() {
            let space = make_space(&spec).unwrap();
            if !space.capabilities().geodesic {
                continue;
            }
            let mut rng = stream_rng(9, 2);
            for _ in 0..100 {
                let x = space.sample(&mut rng).unwrap();
                let y = space.sample(&mut rng).unwrap();
                let g = space.geodesic(&x, &y).unwrap();
                let d = space.distance(&x, &y).unwrap();
                for i in 0..=8 {
                    for j in 0..=8 {
                        let (s, t) = (i as f64 / 8.0, j as f64 / 8.0);
                        let got = space
                            .distance(&g.eval(s).unwrap(), &g.eval(t).unwrap())
                            .unwrap();
                        assert!((got - d * (s - t).abs()).abs() < 1e-9, "{spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn make_space_examples() {
        let e2 = make_space(&SpaceSpec::euclidean(2)).unwrap();
        assert_eq!(
            e2.distance(&Point::xy(0.0, 0.0), &Point::xy(3.0, 4.0))
                .unwrap(),
            5.0
        );

        let chord = make_space(&SpaceSpec::circle(CircleMetric::Chord, 2.0 * PI)).unwrap();
        let arc = make_space(&SpaceSpec::circle(CircleMetric::Arc, 2.0 * PI)).unwrap();
        let (p, q) = (Point::Angle(0.0), Point::Angle(PI));
        assert!((chord.distance(&p, &q).unwrap() - 2.0).abs() < 1e-15);
        assert!((arc.distance(&p, &q).unwrap() - PI).abs() < 1e-15);

        let tripod = MetricTree::new(&tripod_edges()).unwrap();
        let a = tripod.vertex("a").unwrap();
        let b = tripod.vertex("b").unwrap();
        let o = tripod.vertex("o").unwrap();
        let tripod = SpaceHandle::new(tripod);
        assert_eq!(tripod.distance(&a, &b).unwrap(), 2.0);
        assert_eq!(tripod.distance(&a, &o).unwrap(), 1.0);
    }

    fn tripod_edges() -> Vec<TreeEdge> {
        match SpaceSpec::tripod() {
            SpaceSpec::MetricTree { edges } => edges,
            _ => unreachable!(),
        }
    }

    #[test]
    fn capability_table() {
        let caps = |s: SpaceSpec| make_space(&s).unwrap().capabilities();
        assert!(caps(SpaceSpec::euclidean(2)).midpoint);
        assert!(caps(SpaceSpec::circle(CircleMetric::Arc, 1.0)).geodesic);
        assert!(!caps(SpaceSpec::circle(CircleMetric::Chord, 1.0)).midpoint);
        assert!(!caps(SpaceSpec::punctured_plane()).midpoint);
        assert!(!make_space(&SpaceSpec::punctured_plane())
            .unwrap()
            .is_complete());
        assert!(caps(SpaceSpec::product_with_line(SpaceSpec::tripod(), 1.0)).geodesic);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: SpaceSpec = serde_json::from_str(r#"{"kind":"euclidean","n":2}"#).unwrap();
        assert_eq!(spec, SpaceSpec::euclidean(2));
        let nested = SpaceSpec::product_with_line(SpaceSpec::tripod(), 4.0);
        let text = serde_json::to_string(&nested).unwrap();
        assert_eq!(serde_json::from_str::<SpaceSpec>(&text).unwrap(), nested);
    }
}
