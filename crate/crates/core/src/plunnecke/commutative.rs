//! Plünnecke's upward and downward conditions.
//!
//! Upward, for an edge `uv` of layer `i` (`u ∈ X_{i-1}`, `v ∈ X_i`): the
//! edges of layer `i + 1` between `Γ(u)` and `Γ(v)` contain a matching that
//! saturates `Γ(v)`. Downward is the upward condition of the reversed graph.

use fixedbitset::FixedBitSet;
use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::PlunneckeError;
use crate::graph::{Adjacency, LayeredGraph};
use crate::matching::{self, dense::BitMatcher};
use crate::rng::Seed;

/// Above this many `|X_{i}|·|X_{i+1}|` cells, a layer is checked with
/// adjacency lists instead of bitsets.
const MAX_BITSET_CELLS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Upward,
    Downward,
}

/// An edge `u → v` of layer `layer` (`u ∈ X_{layer-1}`, `v ∈ X_layer`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerEdge {
    pub layer: usize,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityReport {
    pub commutative: bool,
    pub upward_violations: Vec<LayerEdge>,
    pub downward_violations: Vec<LayerEdge>,
    /// Condition checks performed; an edge subject to both conditions
    /// counts twice.
    pub edges_checked: usize,
    /// Per-condition sample size when edges were subsampled.
    pub sampled_edges: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Check only this many uniformly chosen edges per condition.
    pub sample_edges: Option<(usize, Seed)>,
}

/// One condition for one edge, by a maximum matching on the induced
/// subgraph.
pub fn check_edge_condition(
    g: &LayeredGraph,
    edge: LayerEdge,
    condition: Condition,
) -> Result<bool, PlunneckeError> {
    let h = g.h();
    if edge.layer == 0 || edge.layer > h {
        return Err(PlunneckeError::LayerOutOfRange {
            layer: edge.layer,
            h,
            condition,
        });
    }
    if !g.layer(edge.layer).has_edge(edge.u, edge.v) {
        return Err(PlunneckeError::EdgeAbsent(edge));
    }
    match condition {
        Condition::Upward => {
            if edge.layer > h - 1 || h < 2 {
                return Err(PlunneckeError::LayerOutOfRange {
                    layer: edge.layer,
                    h,
                    condition,
                });
            }
            Ok(upward_by_lists(g, edge))
        }
        Condition::Downward => {
            if edge.layer < 2 {
                return Err(PlunneckeError::LayerOutOfRange {
                    layer: edge.layer,
                    h,
                    condition,
                });
            }
            let reversed = g.reversed();
            let mirrored = LayerEdge {
                layer: h - edge.layer + 1,
                u: edge.v,
                v: edge.u,
            };
            Ok(upward_by_lists(&reversed, mirrored))
        }
    }
}

fn upward_by_lists(g: &LayeredGraph, edge: LayerEdge) -> bool {
    let gamma_u: Vec<usize> = g.layer(edge.layer).neighbors(edge.u).iter().map(|&x| x as usize).collect();
    let gamma_v: Vec<usize> = g
        .layer(edge.layer + 1)
        .neighbors(edge.v)
        .iter()
        .map(|&x| x as usize)
        .collect();
    let local = g
        .layer(edge.layer + 1)
        .restrict(&gamma_u, &gamma_v)
        .expect("neighborhoods are in range and distinct");
    matching::max_matching(&local).len() == gamma_v.len()
}

/// Checks every applicable edge (or a sample) against both conditions and
/// collects all violations.
pub fn check_commutative(g: &LayeredGraph, options: CheckOptions) -> CommutativityReport {
    let h = g.h();
    let reversed = g.reversed();
    let mut report = CommutativityReport {
        commutative: true,
        upward_violations: Vec::new(),
        downward_violations: Vec::new(),
        edges_checked: 0,
        sampled_edges: options.sample_edges.map(|(count, _)| count),
    };

    let up_edges = upward_edges(g, options.sample_edges.map(|(c, s)| (c, s.derive(0))));
    report.edges_checked += up_edges.len();
    report.upward_violations = failing_edges(g, &up_edges);

    let down_edges = upward_edges(&reversed, options.sample_edges.map(|(c, s)| (c, s.derive(1))));
    report.edges_checked += down_edges.len();
    report.downward_violations = failing_edges(&reversed, &down_edges)
        .into_iter()
        .map(|e| LayerEdge {
            layer: h - e.layer + 1,
            u: e.v,
            v: e.u,
        })
        .collect();
    report.downward_violations.sort();

    report.commutative = report.upward_violations.is_empty() && report.downward_violations.is_empty();
    report
}

/// Edges of layers `1..h-1`, optionally subsampled.
fn upward_edges(g: &LayeredGraph, sample: Option<(usize, Seed)>) -> Vec<LayerEdge> {
    let h = g.h();
    let all: Vec<LayerEdge> = (1..h)
        .flat_map(|layer| {
            g.layer(layer)
                .edges()
                .map(move |(u, v)| LayerEdge { layer, u, v })
        })
        .collect();
    match sample {
        Some((count, seed)) if count < all.len() => {
            let mut rng = seed.rng();
            let mut picked: Vec<usize> = index::sample(&mut rng, all.len(), count).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|i| all[i]).collect()
        }
        _ => all,
    }
}

/// Edges among `edges` (sorted by layer, then `u`) violating the upward
/// condition.
fn failing_edges(g: &LayeredGraph, edges: &[LayerEdge]) -> Vec<LayerEdge> {
    let mut failing = Vec::new();
    let mut start = 0;
    while start < edges.len() {
        let layer = edges[start].layer;
        let end = start + edges[start..].iter().take_while(|e| e.layer == layer).count();
        let batch = &edges[start..end];
        let (left, right) = (g.layer_sizes()[layer], g.layer_sizes()[layer + 1]);
        if left.saturating_mul(right) <= MAX_BITSET_CELLS {
            let checker = BitsetLayer::new(g.layer(layer + 1), left);
            let mut matcher = BitMatcher::new(left);
            let mut mask_owner = usize::MAX;
            let mut mask = FixedBitSet::with_capacity(left);
            for &e in batch {
                if e.u != mask_owner {
                    mask.clear();
                    for &w in g.layer(layer).neighbors(e.u) {
                        mask.insert(w as usize);
                    }
                    mask_owner = e.u;
                }
                let right = g.layer(layer + 1).neighbors(e.v);
                let mask_words = words_of(&mask);
                if !matcher.saturates_right(right, |r| checker.column(r), &mask_words) {
                    failing.push(e);
                }
            }
        } else {
            failing.extend(batch.iter().copied().filter(|&e| !upward_by_lists(g, e)));
        }
        start = end;
    }
    failing
}

fn words_of(bits: &FixedBitSet) -> Vec<u64> {
    let blocks = bits.as_slice();
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    // usize blocks are 64 bits on every supported target
    for (w, &b) in words.iter_mut().zip(blocks) {
        *w = b as u64;
    }
    words
}

/// In-neighbor bitsets of one layer: `column(r)` is `Γ⁻(r)` over the lower
/// level.
struct BitsetLayer {
    words: usize,
    columns: Vec<u64>,
}

impl BitsetLayer {
    fn new(layer: &Adjacency, lower: usize) -> Self {
        let words = lower.div_ceil(64).max(1);
        let mut columns = vec![0u64; words * layer.right_len()];
        for (w, r) in layer.edges() {
            columns[r * words + w / 64] |= 1u64 << (w % 64);
        }
        BitsetLayer { words, columns }
    }

    fn column(&self, r: u32) -> &[u64] {
        let start = r as usize * self.words;
        &self.columns[start..start + self.words]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_example() -> LayeredGraph {
        LayeredGraph::new(
            vec![1, 1, 2],
            vec![
                Adjacency::from_lists(1, vec![vec![0]]).unwrap(),
                Adjacency::from_lists(2, vec![vec![0, 1]]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn identity_stack(m: usize, h: usize) -> LayeredGraph {
        let layer = Adjacency::from_lists(m, (0..m).map(|x| vec![x])).unwrap();
        LayeredGraph::new(vec![m; h + 1], vec![layer; h]).unwrap()
    }

    #[test]
    fn upward_failure() {
        let g = path_example();
        let uv = LayerEdge { layer: 1, u: 0, v: 0 };
        assert!(!check_edge_condition(&g, uv, Condition::Upward).unwrap());
        let vw = LayerEdge { layer: 2, u: 0, v: 1 };
        assert!(check_edge_condition(&g, vw, Condition::Downward).unwrap());
        let report = check_commutative(&g, CheckOptions::default());
        assert!(!report.commutative);
        assert_eq!(report.upward_violations, vec![uv]);
        assert!(report.downward_violations.is_empty());
        assert_eq!(report.edges_checked, 1 + 2);
    }

    #[test]
    fn identity_stack_commutes() {
        let g = identity_stack(4, 3);
        for layer in 1..=3 {
            for x in 0..4 {
                let e = LayerEdge { layer, u: x, v: x };
                if layer < 3 {
                    assert!(check_edge_condition(&g, e, Condition::Upward).unwrap());
                }
                if layer > 1 {
                    assert!(check_edge_condition(&g, e, Condition::Downward).unwrap());
                }
            }
        }
        let report = check_commutative(&g, CheckOptions::default());
        assert!(report.commutative);
        assert_eq!(report.edges_checked, 8 + 8);
    }

    #[test]
    fn single_layer_is_vacuous() {
        let g = identity_stack(3, 1);
        let report = check_commutative(&g, CheckOptions::default());
        assert!(report.commutative);
        assert_eq!(report.edges_checked, 0);
    }

    #[test]
    fn range_and_edge_errors() {
        let g = path_example();
        assert!(matches!(
            check_edge_condition(&g, LayerEdge { layer: 2, u: 0, v: 0 }, Condition::Upward),
            Err(PlunneckeError::LayerOutOfRange { .. })
        ));
        assert!(matches!(
            check_edge_condition(&g, LayerEdge { layer: 1, u: 0, v: 0 }, Condition::Downward),
            Err(PlunneckeError::LayerOutOfRange { .. })
        ));
        assert!(matches!(
            check_edge_condition(&g, LayerEdge { layer: 3, u: 0, v: 0 }, Condition::Upward),
            Err(PlunneckeError::LayerOutOfRange { .. })
        ));
        let g3 = identity_stack(2, 2);
        assert!(matches!(
            check_edge_condition(&g3, LayerEdge { layer: 1, u: 0, v: 1 }, Condition::Upward),
            Err(PlunneckeError::EdgeAbsent(_))
        ));
    }

    #[test]
    fn downward_failure_is_reported_in_original_coordinates() {
        // X0 = {a, b}, X1 = {c}, X2 = {e}: a→c, b→c, c→e.
        // Downward for c→e: matching from a subset of Γ⁻(e) = {c} onto
        // Γ⁻(c) = {a, b} cannot exist.
        let g = LayeredGraph::new(
            vec![2, 1, 1],
            vec![
                Adjacency::from_lists(1, vec![vec![0], vec![0]]).unwrap(),
                Adjacency::from_lists(1, vec![vec![0]]).unwrap(),
            ],
        )
        .unwrap();
        let report = check_commutative(&g, CheckOptions::default());
        assert_eq!(report.downward_violations, vec![LayerEdge { layer: 2, u: 0, v: 0 }]);
        assert!(report.upward_violations.is_empty());
        assert!(!check_edge_condition(&g, LayerEdge { layer: 2, u: 0, v: 0 }, Condition::Downward).unwrap());
    }

    #[test]
    fn sampling_limits_checks() {
        let g = identity_stack(10, 3);
        let report = check_commutative(
            &g,
            CheckOptions {
                sample_edges: Some((5, Seed(1))),
            },
        );
        assert_eq!(report.edges_checked, 10);
        assert_eq!(report.sampled_edges, Some(5));
    }
}
