use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operation requires a hyperbolic isometry (|trace| > 2).
    #[error("isometry is not hyperbolic (|trace| = {trace_abs})")]
    NotHyperbolic { trace_abs: f64 },

    /// The two geodesics are the same unoriented line.
    #[error("geodesics are coincident as unoriented lines")]
    CoincidentLines,

    /// A point that must lie on a geodesic does not.
    #[error("point ({x}, {y}) is not on the given line (offset {offset})")]
    PointNotOnLine { x: f64, y: f64, offset: f64 },

    /// A point that must lie on an axis does not.
    #[error("point is not on the axis (distance {dist})")]
    PointNotOnAxis { dist: f64 },

    /// The Beardon length formula was evaluated on a non-hyperbolic product.
    #[error("degenerate product: cosh(l/2) would be {rhs} <= 1")]
    DegenerateProduct { rhs: f64 },

    /// Crossing tangents are too close to parallel to orient.
    #[error("tangents degenerate at crossing (angle {angle})")]
    TangentDegenerate { angle: f64 },

    /// The identity class has no geodesic and no bracket.
    #[error("the identity class is not admitted here")]
    IdentityClass,

    /// Operation requires a primitive (non-power) class.
    #[error("class {word} is a proper power ({root})^{exponent}")]
    NonPrimitive {
        word: String,
        root: String,
        exponent: u32,
    },

    /// Internal consistency failure: a self-crossing count came out odd.
    #[error("self-crossing count {count} is odd for {word}")]
    OddCount { word: String, count: usize },

    /// Bracket emptiness and self-intersection count disagree.
    #[error("consistency failure for {word}: bracket empty = {bracket_empty}, SL = {self_int}")]
    ConsistencyError {
        word: String,
        bracket_empty: bool,
        self_int: usize,
    },

    /// Surface data violates a validation condition.
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    /// No built-in surface with that name.
    #[error("unknown surface {0:?} (built-ins: \"pants\", \"holed-torus\")")]
    UnknownSurface(String),

    /// Word text could not be parsed.
    #[error("cannot parse word: {0}")]
    Parse(String),

    /// A zigzag reflection check failed on a vertex.
    #[error("reflection does not map vertex to a vertex: {0}")]
    VertexMismatch(String),

    /// Surface config file problems.
    #[error("surface config: {0}")]
    Config(String),
}
