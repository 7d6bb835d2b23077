use serde::{Deserialize, Serialize};

use super::{Adjacency, GraphError, GraphParams, InducedSubgraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
}

/// Minimum out-degree over the left side, minimum in-degree over the right
/// side, and the smaller of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub delta_out: usize,
    pub delta_in: usize,
    pub delta: usize,
}

impl DegreeSummary {
    pub fn of(adj: &Adjacency) -> Result<Self, GraphError> {
        if adj.left_len() == 0 || adj.right_len() == 0 {
            return Err(GraphError::EmptySide);
        }
        let delta_out = (0..adj.left_len()).map(|u| adj.degree(u)).min().unwrap();
        let delta_in = adj.right_degrees().into_iter().min().unwrap();
        Ok(DegreeSummary {
            delta_out,
            delta_in,
            delta: delta_out.min(delta_in),
        })
    }
}

/// A member of `G(k, n, d)`: edges run from `Y = 0..n` to `Z = 0..kn`,
/// every `y` has exactly `kd` out-neighbors and every `z` exactly `d`
/// in-neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BipartiteDigraph {
    params: GraphParams,
    out_adj: Adjacency,
    in_adj: Adjacency,
}

impl BipartiteDigraph {
    /// Builds from the out-neighbor lists of `Y`, checking both degree
    /// constraints.
    pub fn from_out_lists<I, L>(params: GraphParams, lists: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = L>,
        L: IntoIterator<Item = usize>,
    {
        let out_adj = Adjacency::from_lists(params.kn(), lists)?;
        Self::from_adjacency(params, out_adj)
    }

    pub(crate) fn from_flat_rows(params: GraphParams, flat: Vec<u32>) -> Result<Self, GraphError> {
        let out_adj = Adjacency::from_regular_rows(params.kn(), params.kd(), flat)?;
        Self::from_adjacency(params, out_adj)
    }

    pub fn from_adjacency(params: GraphParams, out_adj: Adjacency) -> Result<Self, GraphError> {
        if out_adj.left_len() != params.n() || out_adj.right_len() != params.kn() {
            return Err(GraphError::ShapeMismatch {
                expected: (params.n(), params.kn()),
                found: (out_adj.left_len(), out_adj.right_len()),
            });
        }
        for y in 0..params.n() {
            if out_adj.degree(y) != params.kd() {
                return Err(GraphError::DegreeViolation {
                    side: Direction::Out,
                    vertex: y,
                    expected: params.kd(),
                    found: out_adj.degree(y),
                });
            }
        }
        let in_adj = out_adj.transpose();
        for z in 0..params.kn() {
            if in_adj.degree(z) != params.d() {
                return Err(GraphError::DegreeViolation {
                    side: Direction::In,
                    vertex: z,
                    expected: params.d(),
                    found: in_adj.degree(z),
                });
            }
        }
        Ok(BipartiteDigraph {
            params,
            out_adj,
            in_adj,
        })
    }

    /// The circulant member of `G(k, n, d)` for integer `k`: `Z` is
    /// `Z_{kn}`, `y_i` sits at `ik`, and `y → z` iff `z - y ∈ {0, …, kd-1}`
    /// modulo `kn`.
    pub fn circulant(params: GraphParams) -> Result<Self, GraphError> {
        if !params.k().is_integer() {
            return Err(GraphError::NonIntegerK { k: params.k() });
        }
        let k = params.k().num() as usize;
        let (kn, kd) = (params.kn(), params.kd());
        let mut flat = Vec::with_capacity(params.edge_count());
        for i in 0..params.n() {
            let base = i * k;
            flat.extend((0..kd).map(|j| ((base + j) % kn) as u32));
        }
        Self::from_flat_rows(params, flat)
    }

    /// A deterministic member of `G(k, n, d)` for any rational `k`: the
    /// `kd·n` out-stubs, taken in order, are dealt to `Z` cyclically.
    /// Row `i` is `{i·kd, …, i·kd + kd - 1} mod kn`; since `kd ≤ kn` each
    /// row is simple and each `z` is hit exactly `d` times.
    pub fn cyclic(params: GraphParams) -> Self {
        let kn = params.kn();
        let flat = (0..params.edge_count()).map(|s| (s % kn) as u32).collect();
        Self::from_flat_rows(params, flat).expect("cyclic dealing is biregular")
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn out_adjacency(&self) -> &Adjacency {
        &self.out_adj
    }

    pub fn in_adjacency(&self) -> &Adjacency {
        &self.in_adj
    }

    /// `Γ(y)`.
    pub fn out_neighbors(&self, y: usize) -> &[u32] {
        self.out_adj.neighbors(y)
    }

    /// `Γ⁻(z)`.
    pub fn in_neighbors(&self, z: usize) -> &[u32] {
        self.in_adj.neighbors(z)
    }

    pub fn has_edge(&self, y: usize, z: usize) -> bool {
        self.out_adj.has_edge(y, z)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj.edges()
    }

    /// `Γ(S)` (direction `Out`, `S ⊆ Y`) or `Γ⁻(S)` (direction `In`,
    /// `S ⊆ Z`) iterated `steps` times. Only `steps ≤ 1` is meaningful on
    /// a single layer.
    pub fn neighborhood(
        &self,
        set: &[usize],
        direction: Direction,
        steps: usize,
    ) -> Result<Vec<usize>, GraphError> {
        match steps {
            0 => {
                let mut s = set.to_vec();
                s.sort_unstable();
                s.dedup();
                Ok(s)
            }
            1 => match direction {
                Direction::Out => self.out_adj.neighborhood(set),
                Direction::In => self.in_adj.neighborhood(set),
            },
            _ => Err(GraphError::DirectionUnavailable { steps, layers: 1 }),
        }
    }

    pub fn min_degrees(&self) -> DegreeSummary {
        DegreeSummary {
            delta_out: self.params.kd(),
            delta_in: self.params.d(),
            delta: self.params.kd().min(self.params.d()),
        }
    }

    /// Subgraph induced on `(A, B)`, `A ⊆ Y`, `B ⊆ Z`.
    pub fn induce(&self, a: &[usize], b: &[usize]) -> Result<InducedSubgraph, GraphError> {
        InducedSubgraph::new(&self.out_adj, a, b)
    }

    /// Replaces edges `ac, bd` by `ad, bc`. Requires `ac, bd ∈ E` and
    /// `ad, bc ∉ E`.
    pub fn apply_switching(&self, a: usize, b: usize, c: usize, d: usize) -> Result<Self, GraphError> {
        let (n, kn) = (self.params.n(), self.params.kn());
        for (index, len) in [(a, n), (b, n), (c, kn), (d, kn)] {
            if index >= len {
                return Err(GraphError::IndexOutOfRange { index, len });
            }
        }
        let check = |y: usize, z: usize, present: bool| {
            if self.has_edge(y, z) != present {
                Err(GraphError::SwitchPrecondition { y, z, present })
            } else {
                Ok(())
            }
        };
        check(a, c, true)?;
        check(b, d, true)?;
        check(a, d, false)?;
        check(b, c, false)?;

        let swap_row = |y: usize, from: usize, to: usize| {
            let mut row: Vec<u32> = self.out_neighbors(y).to_vec();
            let pos = row.iter().position(|&z| z as usize == from).unwrap();
            row[pos] = to as u32;
            row.sort_unstable();
            row
        };
        let row_a = swap_row(a, c, d);
        let row_b = swap_row(b, d, c);
        let mut flat = Vec::with_capacity(self.params.edge_count());
        for y in 0..n {
            if y == a {
                flat.extend_from_slice(&row_a);
            } else if y == b {
                flat.extend_from_slice(&row_b);
            } else {
                flat.extend_from_slice(self.out_neighbors(y));
            }
        }
        Self::from_flat_rows(self.params, flat)
    }

    /// Full degree scan; true for every value this type can hold, exposed
    /// for tests and debug checks.
    pub fn is_biregular(&self) -> bool {
        (0..self.params.n()).all(|y| self.out_adj.degree(y) == self.params.kd())
            && self
                .out_adj
                .right_degrees()
                .iter()
                .all(|&deg| deg == self.params.d())
            && self.in_adj == self.out_adj.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u64, n: usize, d: usize) -> GraphParams {
        GraphParams::family(k, 1, n, d).unwrap()
    }

    #[test]
    fn circulant_identity() {
        let g = BipartiteDigraph::circulant(params(1, 3, 1)).unwrap();
        for y in 0..3 {
            assert_eq!(g.out_neighbors(y), &[y as u32]);
        }
    }

    #[test]
    fn circulant_k2() {
        let g = BipartiteDigraph::circulant(params(2, 3, 1)).unwrap();
        // y_i sits at 2i in Z_6, Γ(y) = {2i, 2i+1}
        assert_eq!(g.out_neighbors(0), &[0, 1]);
        assert_eq!(g.out_neighbors(1), &[2, 3]);
        assert_eq!(g.out_neighbors(2), &[4, 5]);
        for z in 0..6 {
            assert_eq!(g.in_neighbors(z).len(), 1);
        }
        assert!(g.is_biregular());
    }

    #[test]
    fn circulant_k1_d2() {
        let g = BipartiteDigraph::circulant(params(1, 4, 2)).unwrap();
        assert_eq!(g.out_neighbors(3), &[0, 3]);
        for z in 0..4usize {
            let mut expect = vec![((z + 3) % 4) as u32, z as u32];
            expect.sort();
            assert_eq!(g.in_neighbors(z), expect.as_slice());
        }
    }

    #[test]
    fn circulant_rejects_rational_k() {
        let p = GraphParams::family(3, 2, 4, 2).unwrap();
        assert!(matches!(
            BipartiteDigraph::circulant(p),
            Err(GraphError::NonIntegerK { .. })
        ));
        assert!(BipartiteDigraph::cyclic(p).is_biregular());
    }

    #[test]
    fn circulant_biregular_sweep() {
        for k in 1..=4u64 {
            for n in 1..=12usize {
                for d in 1..=n {
                    let p = match GraphParams::family(k, 1, n, d) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    assert!(BipartiteDigraph::circulant(p).unwrap().is_biregular());
                    assert!(BipartiteDigraph::cyclic(p).is_biregular());
                }
            }
        }
    }

    #[test]
    fn circulant_large() {
        let p = GraphParams::validate(1, 1, 1_000_000, 3).unwrap();
        assert!(BipartiteDigraph::circulant(p).unwrap().is_biregular());
    }

    #[test]
    fn neighborhoods() {
        let g = BipartiteDigraph::circulant(params(1, 4, 2)).unwrap();
        assert_eq!(g.neighborhood(&[2, 0], Direction::Out, 0).unwrap(), vec![0, 2]);
        assert_eq!(g.neighborhood(&[0, 2], Direction::Out, 1).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(g.neighborhood(&[1], Direction::In, 1).unwrap(), vec![0, 1]);
        assert!(matches!(
            g.neighborhood(&[1], Direction::Out, 2),
            Err(GraphError::DirectionUnavailable { .. })
        ));
    }

    #[test]
    fn switching_roundtrip() {
        let g = BipartiteDigraph::circulant(params(1, 4, 2)).unwrap();
        // Γ(0) = {0,1}, Γ(2) = {2,3}; switch 0→0, 2→2 into 0→2, 2→0
        let h = g.apply_switching(0, 2, 0, 2).unwrap();
        assert!(h.has_edge(0, 2) && h.has_edge(2, 0));
        assert!(!h.has_edge(0, 0) && !h.has_edge(2, 2));
        assert!(h.is_biregular());
        assert_eq!(h.apply_switching(0, 2, 2, 0).unwrap(), g);
    }

    #[test]
    fn switching_preconditions() {
        let g = BipartiteDigraph::circulant(params(1, 4, 2)).unwrap();
        // 0→1 and 1→1 both exist, so a→d is present
        assert!(matches!(
            g.apply_switching(0, 1, 0, 1),
            Err(GraphError::SwitchPrecondition { y: 0, z: 1, present: false })
        ));
        assert!(matches!(
            g.apply_switching(0, 2, 3, 2),
            Err(GraphError::SwitchPrecondition { y: 0, z: 3, present: true })
        ));
        assert!(g.apply_switching(0, 9, 0, 1).is_err());
    }

    #[test]
    fn degree_violation_named() {
        let p = params(1, 2, 1);
        assert!(matches!(
            BipartiteDigraph::from_out_lists(p, vec![vec![0], vec![0]]),
            Err(GraphError::DegreeViolation { side: Direction::In, vertex: 0, .. })
        ));
        assert!(matches!(
            BipartiteDigraph::from_out_lists(p, vec![vec![0, 1], vec![]]),
            Err(GraphError::DegreeViolation { side: Direction::Out, vertex: 0, .. })
        ));
    }
}
