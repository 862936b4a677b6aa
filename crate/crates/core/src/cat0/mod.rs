//! Checks for non-positive curvature: triangle comparisons, the four-point
//! condition, convexity of the metric, projections and flatness.

mod convexity;
mod flatness;
mod four_point;
mod projection;
mod triangle;

pub use convexity::{
    approx_midpoint_bound, approx_midpoint_closeness_check, approx_midpoint_delta, convexity_check,
};
pub use flatness::{flatness_detect, FlatnessInput, FlatnessKind, FlatnessReport};
pub use four_point::{
    find_subembedding, four_point_scan, quadruple_check, Refutation, Subembedding, PAIRINGS,
};
pub use projection::{project_to_convex, Ball, ConvexSet, GeodesicSegment, ProjectionResult};
pub use triangle::{
    cat0_triangle_check, equivalent_condition_check, gluing_check, Characterization,
};
