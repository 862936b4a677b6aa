use thiserror::Error;

use crate::point::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distance or curve evaluation produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("space `{space}` does not support {capability}")]
    Unsupported {
        space: String,
        capability: &'static str,
    },

    /// Three lengths that do not satisfy the triangle inequality.
    #[error("side lengths {sides:?} cannot be realized by a planar triangle (excess {excess:e})")]
    NotEmbeddable { sides: [f64; 3], excess: f64 },

    /// The ε-midpoint search ran out of budget.
    #[error("no {epsilon:e}-midpoint found (best achieved {best_achieved:e})")]
    MidpointNotFound {
        x: Point,
        y: Point,
        epsilon: f64,
        best_achieved: f64,
    },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A Cauchy sequence whose limit could not be certified inside the space.
    #[error("incompleteness: {reason}")]
    Incomplete { candidate: Point, reason: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("undefined angle: {0}")]
    UndefinedAngle(String),

    /// A curve produced by a construction violates its certificate.
    #[error("certificate violated: {0}")]
    Certificate(String),

    /// A space specification that breaks a metric or structural axiom.
    #[error("invalid space: {axiom} violated at {witness:?}")]
    Validation { axiom: String, witness: Vec<String> },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
