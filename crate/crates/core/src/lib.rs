//! Random biregular bipartite digraphs `G(k, n, d)`: samplers, perfect
//! matchings in induced subgraphs, closed-form probability oracles, and
//! commutative layered graphs with their magnification ratios.

pub mod analytics;
pub mod experiments;
pub mod format;
pub mod graph;
pub mod matching;
pub mod output;
pub mod plunnecke;
pub mod rng;
pub mod sampler;

pub use graph::{
    Adjacency, BipartiteDigraph, DegreeSummary, Direction, GraphError, GraphParams,
    InducedSubgraph, LayeredGraph, Ratio,
};
pub use rng::Seed;
