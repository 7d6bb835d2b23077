//! Bipartite and layered digraphs.
//!
//! All graph values are immutable after construction. Vertices are
//! positional: `Y = 0..n` and `Z = 0..kn` for a [`BipartiteDigraph`], and
//! `X_i = 0..|X_i|` for each level of a [`LayeredGraph`].

mod adjacency;
mod digraph;
mod induced;
mod layered;
mod params;

pub use adjacency::Adjacency;
pub use digraph::{BipartiteDigraph, DegreeSummary, Direction};
pub use induced::InducedSubgraph;
pub use layered::LayeredGraph;
pub use params::{GraphParams, Ratio};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{name} must be a positive integer")]
    NonPositive { name: &'static str },
    #[error("cannot parse rational `{0}` (expected p/q)")]
    BadRational(String),
    #[error("k*n is not an integer (k = {k}, n = {n})")]
    NonIntegerKN { k: Ratio, n: usize },
    #[error("k*d is not an integer (k = {k}, d = {d})")]
    NonIntegerKD { k: Ratio, d: usize },
    #[error("k*d = {kd} exceeds n = {n}")]
    KdExceedsN { kd: usize, n: usize },
    #[error("d = {d} exceeds n = {n}")]
    DExceedsN { d: usize, n: usize },
    #[error("k = {k} is not an integer")]
    NonIntegerK { k: Ratio },
    #[error("graph with kn = {kn} is too large for 32-bit vertex indices")]
    TooLarge { kn: usize },
    #[error("vertex index {index} out of range (side has {len} vertices)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vertex {index} listed twice")]
    DuplicateVertex { index: usize },
    #[error("duplicate edge in the list of vertex {vertex}")]
    DuplicateEdge { vertex: usize },
    #[error("expected a {}x{} adjacency, found {}x{}", expected.0, expected.1, found.0, found.1)]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{side:?}-degree of vertex {vertex} is {found}, expected {expected}")]
    DegreeViolation {
        side: Direction,
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot take {steps} neighborhood steps in a graph with {layers} layer(s)")]
    DirectionUnavailable { steps: usize, layers: usize },
    #[error("switching precondition violated: edge {y}->{z} must be {}", if *present { "present" } else { "absent" })]
    SwitchPrecondition { y: usize, z: usize, present: bool },
    #[error("empty side")]
    EmptySide,
    #[error("layer {layer}: {detail}")]
    LayerMismatch { layer: usize, detail: String },
}
