use serde::{Deserialize, Serialize};

use super::{Adjacency, BipartiteDigraph, GraphError, GraphParams};

/// A directed graph on `X_0 ∪ … ∪ X_h` with edges only from `X_{i-1}` to
/// `X_i`. Layer `i` (1-based) is the adjacency `X_{i-1} → X_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredGraph {
    layer_sizes: Vec<usize>,
    layers: Vec<Adjacency>,
    /// Present when every layer is a member of some `G(k, |X_{i-1}|, d)`.
    biregular: Option<Vec<GraphParams>>,
}

impl LayeredGraph {
    pub fn new(layer_sizes: Vec<usize>, layers: Vec<Adjacency>) -> Result<Self, GraphError> {
        if layer_sizes.len() != layers.len() + 1 {
            return Err(GraphError::LayerMismatch {
                layer: layers.len(),
                detail: format!(
                    "{} layer sizes for {} layers",
                    layer_sizes.len(),
                    layers.len()
                ),
            });
        }
        for (i, adj) in layers.iter().enumerate() {
            if adj.left_len() != layer_sizes[i] || adj.right_len() != layer_sizes[i + 1] {
                return Err(GraphError::LayerMismatch {
                    layer: i + 1,
                    detail: format!(
                        "adjacency is {}x{}, layers are {}x{}",
                        adj.left_len(),
                        adj.right_len(),
                        layer_sizes[i],
                        layer_sizes[i + 1]
                    ),
                });
            }
        }
        Ok(LayeredGraph {
            layer_sizes,
            layers,
            biregular: None,
        })
    }

    /// Stacks biregular layers; `X_i` of layer `i` must be `X_{i-1}` of
    /// layer `i + 1`.
    pub fn from_biregular(layers: Vec<BipartiteDigraph>) -> Result<Self, GraphError> {
        if layers.is_empty() {
            return Err(GraphError::LayerMismatch {
                layer: 0,
                detail: "no layers".into(),
            });
        }
        let mut sizes = vec![layers[0].params().n()];
        sizes.extend(layers.iter().map(|g| g.params().kn()));
        let params = layers.iter().map(|g| *g.params()).collect();
        let adjs = layers.into_iter().map(|g| g.out_adjacency().clone()).collect();
        let mut lg = Self::new(sizes, adjs)?;
        lg.biregular = Some(params);
        Ok(lg)
    }

    /// Number of layer gaps `h`.
    pub fn h(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    /// Adjacency `X_{i-1} → X_i`, `1 ≤ i ≤ h`.
    pub fn layer(&self, i: usize) -> &Adjacency {
        &self.layers[i - 1]
    }

    pub fn layers(&self) -> &[Adjacency] {
        &self.layers
    }

    pub fn biregular_params(&self) -> Option<&[GraphParams]> {
        self.biregular.as_deref()
    }

    pub fn edge_count(&self) -> usize {
        self.layers.iter().map(Adjacency::edge_count).sum()
    }

    /// The same graph with every edge reversed: layer `i` of the result is
    /// the transpose of layer `h - i + 1`.
    pub fn reversed(&self) -> LayeredGraph {
        let mut sizes = self.layer_sizes.clone();
        sizes.reverse();
        let layers = self.layers.iter().rev().map(Adjacency::transpose).collect();
        LayeredGraph {
            layer_sizes: sizes,
            layers,
            biregular: None,
        }
    }

    /// `Γ^{(steps)}(S)` for `S ⊆ X_level`, following edges upward.
    pub fn iterated_neighborhood(
        &self,
        level: usize,
        set: &[usize],
        steps: usize,
    ) -> Result<Vec<usize>, GraphError> {
        if level + steps > self.h() {
            return Err(GraphError::DirectionUnavailable {
                steps: level + steps,
                layers: self.h(),
            });
        }
        let mut current: Vec<usize> = set.to_vec();
        current.sort_unstable();
        current.dedup();
        if let Some(&max) = current.last() {
            if max >= self.layer_sizes[level] {
                return Err(GraphError::IndexOutOfRange {
                    index: max,
                    len: self.layer_sizes[level],
                });
            }
        }
        for layer in &self.layers[level..level + steps] {
            current = layer.neighborhood(&current)?;
        }
        Ok(current)
    }
}
