//! Executable checks for metric geometry.
//!
//! Spaces are accessed through [`SpaceHandle`], a distance oracle with
//! optional midpoint, geodesic and sampling capabilities. On top of it the
//! crate provides curve length and the induced length metric, geodesic
//! construction from ε-midpoints, Euclidean comparison triangles and angles,
//! and a battery of CAT(0) checks. Every check returns a verdict with the
//! points where the worst violation was observed.

pub mod cat0;
pub mod comparison;
pub mod curve;
pub mod error;
pub mod geodesic;
pub mod length;
pub mod point;
pub mod rng;
pub mod space;
pub mod spaces;
pub mod verdict;

pub use curve::{Curve, Interval, Partition};
pub use error::{Error, Result};
pub use length::{Extended, LengthEstimate};
pub use point::{Point, Vec2};
pub use space::{Capabilities, MetricSpace, SpaceHandle};
pub use spaces::{make_space, SpaceSpec};
pub use verdict::{CheckVerdict, Status, Witness};
