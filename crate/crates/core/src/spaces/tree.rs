//! Finite metric trees with exact path distances.
//!
//! A point is an edge index plus an offset measured from the edge's first
//! endpoint, so vertices have one representation per incident edge.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Capabilities, MetricSpace};

/// Offsets may overshoot an edge by this much (relative) before the point
/// is rejected.
const OFFSET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: String,
    pub v: String,
    pub weight: f64,
}

impl TreeEdge {
    pub fn new(u: impl Into<String>, v: impl Into<String>, weight: f64) -> Self {
        TreeEdge {
            u: u.into(),
            v: v.into(),
            weight,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetricTree {
    labels: Vec<String>,
    /// (u, v, weight) by vertex index.
    edges: Vec<(usize, usize, f64)>,
    /// (neighbor, edge index) per vertex.
    adjacency: Vec<Vec<(usize, usize)>>,
    vertex_dist: Vec<Vec<f64>>,
    total_weight: f64,
}

/// One straight run along an edge, between two offsets.
#[derive(Debug, Clone, Copy)]
struct Leg {
    edge: usize,
    from: f64,
    to: f64,
}

impl MetricTree {
    pub fn new(edges: &[TreeEdge]) -> Result<Self> {
        if edges.is_empty() {
            return Err(super::validation("tree has at least one edge", vec![]));
        }
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut intern = |name: &str, labels: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        let mut resolved = Vec::with_capacity(edges.len());
        for e in edges {
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(super::validation(
                    "edge weights > 0",
                    vec![e.u.clone(), e.v.clone(), e.weight.to_string()],
                ));
            }
            if e.u == e.v {
                return Err(super::validation(
                    "acyclic (self-loop)",
                    vec![e.u.clone(), e.v.clone()],
                ));
            }
            let u = intern(&e.u, &mut labels);
            let v = intern(&e.v, &mut labels);
            resolved.push((u, v, e.weight));
        }
        let n = labels.len();
        if resolved.len() != n - 1 {
            return Err(super::validation(
                "tree has |V| - 1 edges",
                vec![
                    format!("{} vertices", n),
                    format!("{} edges", resolved.len()),
                ],
            ));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, &(u, v, _)) in resolved.iter().enumerate() {
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        // Single-source sweeps; with |E| = |V| - 1, reaching every vertex
        // from the root rules out cycles too.
        let mut vertex_dist = vec![vec![f64::INFINITY; n]; n];
        for (s, row) in vertex_dist.iter_mut().enumerate() {
            row[s] = 0.0;
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for &(b, e) in &adjacency[a] {
                    if row[b].is_infinite() {
                        row[b] = row[a] + resolved[e].2;
                        stack.push(b);
                    }
                }
            }
            if let Some(unreached) = row.iter().position(|d| d.is_infinite()) {
                return Err(super::validation(
                    "tree is connected",
                    vec![labels[s].clone(), labels[unreached].clone()],
                ));
            }
        }
        let total_weight = resolved.iter().map(|e| e.2).sum();
        Ok(MetricTree {
            labels,
            edges: resolved,
            adjacency,
            vertex_dist,
            total_weight,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// A point representing the named vertex.
    pub fn vertex(&self, label: &str) -> Option<Point> {
        let v = self.labels.iter().position(|l| l == label)?;
        Some(self.vertex_point(v))
    }

    fn vertex_point(&self, v: usize) -> Point {
        let (_, e) = self.adjacency[v][0];
        let (u, _, w) = self.edges[e];
        Point::Tree {
            edge: e,
            offset: if u == v { 0.0 } else { w },
        }
    }

    /// The point at `offset` along the named edge, measured from `from`.
    pub fn point_on_edge(&self, from: &str, to: &str, offset: f64) -> Option<Point> {
        self.edges.iter().enumerate().find_map(|(i, &(u, v, w))| {
            let (lu, lv) = (&self.labels[u], &self.labels[v]);
            if lu == from && lv == to {
                Some(Point::Tree { edge: i, offset })
            } else if lu == to && lv == from {
                Some(Point::Tree {
                    edge: i,
                    offset: w - offset,
                })
            } else {
                None
            }
        })
    }

    fn locate(&self, p: &Point) -> Result<(usize, f64)> {
        match *p {
            Point::Tree { edge, offset } if edge < self.edges.len() => {
                let w = self.edges[edge].2;
                let slack = OFFSET_SLACK * (1.0 + w);
                if offset.is_finite() && offset >= -slack && offset <= w + slack {
                    return Ok((edge, offset.clamp(0.0, w)));
                }
                Err(Error::domain(format!(
                    "offset {offset} outside edge {edge} of weight {w}"
                )))
            }
            _ => Err(Error::domain(format!("{p} is not a point of this tree"))),
        }
    }

    /// Route from p to q as a list of legs. Also returns the path length.
    fn route(&self, p: &Point, q: &Point) -> Result<(Vec<Leg>, f64)> {
        let (ep, sp) = self.locate(p)?;
        let (eq, sq) = self.locate(q)?;
        if ep == eq {
            let leg = Leg {
                edge: ep,
                from: sp,
                to: sq,
            };
            return Ok((vec![leg], (sp - sq).abs()));
        }
        let (pu, pv, pw) = self.edges[ep];
        let (qu, qv, qw) = self.edges[eq];
        // (vertex, distance to it, offset of that vertex on the edge)
        let exits = [(pu, sp, 0.0), (pv, pw - sp, pw)];
        let entries = [(qu, sq, 0.0), (qv, qw - sq, qw)];
        let mut best: Option<(f64, usize, f64, usize, f64)> = None;
        for &(a, da, oa) in &exits {
            for &(b, db, ob) in &entries {
                let total = da + self.vertex_dist[a][b] + db;
                if best.is_none_or(|(t, ..)| total < t) {
                    best = Some((total, a, oa, b, ob));
                }
            }
        }
        let (total, a, oa, b, ob) = best.expect("four candidates");
        let mut legs = vec![Leg {
            edge: ep,
            from: sp,
            to: oa,
        }];
        let mut cur = a;
        while cur != b {
            let (next, e) = self.next_hop(cur, b);
            let (u, _, w) = self.edges[e];
            let (from, to) = if u == cur { (0.0, w) } else { (w, 0.0) };
            legs.push(Leg { edge: e, from, to });
            cur = next;
        }
        legs.push(Leg {
            edge: eq,
            from: ob,
            to: sq,
        });
        Ok((legs, total))
    }

    /// Neighbor of `a` on the path to `b`.
    fn next_hop(&self, a: usize, b: usize) -> (usize, usize) {
        let target = self.vertex_dist[a][b];
        self.adjacency[a]
            .iter()
            .copied()
            .min_by(|&(x, ex), &(y, ey)| {
                let fx = (self.edges[ex].2 + self.vertex_dist[x][b] - target).abs();
                let fy = (self.edges[ey].2 + self.vertex_dist[y][b] - target).abs();
                fx.total_cmp(&fy)
            })
            .expect("vertex has a neighbor")
    }

    fn walk(legs: &[Leg], s: f64) -> Point {
        let mut remaining = s.max(0.0);
        for leg in legs {
            let len = (leg.to - leg.from).abs();
            if remaining <= len {
                let dir = if leg.to >= leg.from { 1.0 } else { -1.0 };
                return Point::Tree {
                    edge: leg.edge,
                    offset: leg.from + dir * remaining,
                };
            }
            remaining -= len;
        }
        let last = legs.last().expect("route has legs");
        Point::Tree {
            edge: last.edge,
            offset: last.to,
        }
    }

    /// Point at path distance `s` from `p` toward `q`.
    pub fn point_along(&self, p: &Point, q: &Point, s: f64) -> Result<Point> {
        let (legs, _) = self.route(p, q)?;
        Ok(Self::walk(&legs, s))
    }
}

impl MetricSpace for MetricTree {
    fn kind(&self) -> &str {
        "metric_tree"
    }

    fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        Ok(self.route(p, q)?.1)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            midpoint: true,
            geodesic: true,
            sampler: true,
        }
    }

    fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        let (legs, total) = self.route(p, q)?;
        Ok(Self::walk(&legs, 0.5 * total))
    }

    fn geodesic(&self, p: &Point, q: &Point) -> Result<Curve> {
        let (legs, total) = self.route(p, q)?;
        let end = q.clone();
        Ok(Curve::from_fn(Interval::UNIT, move |t| {
            if t >= 1.0 {
                end.clone()
            } else {
                Self::walk(&legs, t * total)
            }
        }))
    }

    /// Uniform with respect to length.
    fn sample(&self, rng: &mut StdRng) -> Result<Point> {
        let mut s = rng.gen_range(0.0..self.total_weight);
        for (i, &(_, _, w)) in self.edges.iter().enumerate() {
            if s < w {
                return Ok(Point::Tree { edge: i, offset: s });
            }
            s -= w;
        }
        let last = self.edges.len() - 1;
        Ok(Point::Tree {
            edge: last,
            offset: self.edges[last].2,
        })
    }

    fn diameter_hint(&self) -> Option<f64> {
        Some(self.total_weight)
    }

    fn project_onto_geodesic(&self, x: &Point, p: &Point, q: &Point) -> Option<Result<Point>> {
        // In a tree the nearest point of [p, q] to x sits at the Gromov
        // product (x | q)_p from p.
        Some((|| {
            let dpq = self.distance(p, q)?;
            let along = 0.5 * (self.distance(p, x)? + dpq - self.distance(q, x)?);
            self.point_along(p, q, along.clamp(0.0, dpq))
        })())
    }
}

/// Edges of a random tree on `edges + 1` vertices: each new vertex attaches
/// to a uniformly chosen earlier one, with weight uniform in `[0.1, 2)`.
pub fn random_tree_edges(rng: &mut StdRng, edges: usize) -> Vec<TreeEdge> {
    (1..=edges)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            TreeEdge::new(
                format!("v{parent}"),
                format!("v{v}"),
                rng.gen_range(0.1..2.0),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;

    fn tripod() -> MetricTree {
        match SpaceSpec::tripod() {
            SpaceSpec::MetricTree { edges } => MetricTree::new(&edges).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn tripod_distances_and_midpoint() {
        let t = tripod();
        let (a, b, o) = (
            t.vertex("a").unwrap(),
            t.vertex("b").unwrap(),
            t.vertex("o").unwrap(),
        );
        assert_eq!(t.distance(&a, &b).unwrap(), 2.0);
        let m = t.midpoint(&a, &b).unwrap();
        assert_eq!(t.distance(&m, &o).unwrap(), 0.0);
    }

    #[test]
    fn path_quarter_points() {
        let t = tripod();
        let (a, b) = (t.vertex("a").unwrap(), t.vertex("b").unwrap());
        let g = t.geodesic(&a, &b).unwrap();
        let q = g.eval(0.25).unwrap();
        let expected = t.point_on_edge("o", "a", 0.5).unwrap();
        assert!(t.distance(&q, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_cycles_and_disconnection() {
        let cyc = [
            TreeEdge::new("a", "b", 1.0),
            TreeEdge::new("b", "c", 1.0),
            TreeEdge::new("c", "a", 1.0),
        ];
        assert!(MetricTree::new(&cyc).is_err());
        let split = [
            TreeEdge::new("a", "b", 1.0),
            TreeEdge::new("c", "d", 1.0),
            TreeEdge::new("a", "b", 1.0),
        ];
        assert!(MetricTree::new(&split).is_err());
        assert!(MetricTree::new(&[TreeEdge::new("a", "b", 0.0)]).is_err());
    }

    #[test]
    fn vertex_representations_coincide() {
        let t = tripod();
        let via_a = t.point_on_edge("o", "a", 0.0).unwrap();
        let via_b = t.point_on_edge("o", "b", 0.0).unwrap();
        assert_eq!(t.distance(&via_a, &via_b).unwrap(), 0.0);
    }

    #[test]
    fn gromov_projection_onto_path() {
        let t = tripod();
        let (a, b, c) = (
            t.vertex("a").unwrap(),
            t.vertex("b").unwrap(),
            t.vertex("c").unwrap(),
        );
        let p = t.project_onto_geodesic(&a, &b, &c).unwrap().unwrap();
        assert_eq!(t.distance(&p, &t.vertex("o").unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn foreign_points_are_rejected() {
        let t = tripod();
        assert!(t
            .distance(
                &Point::Tree {
                    edge: 7,
                    offset: 0.0
                },
                &t.vertex("a").unwrap()
            )
            .is_err());
        assert!(t
            .distance(
                &Point::Tree {
                    edge: 0,
                    offset: 1.5
                },
                &t.vertex("a").unwrap()
            )
            .is_err());
    }
}
