//! Layered graphs built by stacking random biregular layers, commutativity
//! certification, and magnification ratios.

mod commutative;
mod flow;
mod magnification;

pub use commutative::{
    check_commutative, check_edge_condition, CheckOptions, CommutativityReport, Condition, LayerEdge,
};
pub use magnification::{
    magnification_bruteforce, magnification_flow, plunnecke_monotone_check, ratio_power,
    MagnificationResult, BRUTEFORCE_MAX_BASE,
};

use thiserror::Error;

use crate::graph::{GraphError, GraphParams, LayeredGraph, Ratio};
use crate::rng::Seed;
use crate::sampler::{self, SampleError, SamplerMethod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlunneckeError {
    #[error("level {level} is not integral: k^i m is not an integer")]
    NonIntegralLayer { level: usize },
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("k = {0} must be at least 1")]
    KBelowOne(Ratio),
    #[error("h must be at least 1")]
    NoLayers,
    #[error("edge {}->{} is not in layer {}", .0.u, .0.v, .0.layer)]
    EdgeAbsent(LayerEdge),
    #[error("{condition:?} condition is not defined for layer {layer} of {h}")]
    LayerOutOfRange {
        layer: usize,
        h: usize,
        condition: Condition,
    },
    #[error("level {level} out of range 1..={h}")]
    LevelOutOfRange { level: usize, h: usize },
    #[error("X_0 is empty")]
    EmptyBase,
    #[error("|X_0| = {base} exceeds the brute-force limit {max}")]
    TooLarge { base: usize, max: usize },
    #[error("value {index} is not positive")]
    NonPositiveValue { index: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Parameters of layer `i` (1-based) in the stacked construction:
/// `G(k, k^{i-1} m, d)`.
pub fn layer_params(k: Ratio, m: usize, d: usize, h: usize) -> Result<Vec<GraphParams>, PlunneckeError> {
    if k.num() < k.den() {
        return Err(PlunneckeError::KBelowOne(k));
    }
    if h == 0 {
        return Err(PlunneckeError::NoLayers);
    }
    if d < 2 || d > m {
        return Err(PlunneckeError::InvalidDegree(format!("d = {d} must lie in 2..={m}")));
    }
    (1..=h)
        .map(|i| {
            let n = k
                .power_times(i as u32 - 1, m as u64)
                .ok_or(PlunneckeError::NonIntegralLayer { level: i - 1 })?;
            k.times(n).ok_or(PlunneckeError::NonIntegralLayer { level: i })?;
            GraphParams::family_with(k, n as usize, d).map_err(|e| match e {
                GraphError::NonIntegerKD { .. } => {
                    PlunneckeError::InvalidDegree(format!("k*d is not an integer for d = {d}"))
                }
                other => other.into(),
            })
        })
        .collect()
}

/// Stacks `h` independent samples, layer `i` from `G(k, k^{i-1} m, d)`, so
/// that `|X_i| = k^i m`.
pub fn build_random_layered(
    k: Ratio,
    m: usize,
    d: usize,
    h: usize,
    seed: Seed,
    method: SamplerMethod,
) -> Result<LayeredGraph, PlunneckeError> {
    let layers = layer_params(k, m, d, h)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| sampler::sample(p, method, seed.derive(i as u64 + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LayeredGraph::from_biregular(layers)?)
}
