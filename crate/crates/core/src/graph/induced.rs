use serde::{Deserialize, Serialize};

use super::{Adjacency, DegreeSummary, GraphError};

/// The subgraph `H = G[A, B]` with local indices `0..|A|` and `0..|B|`.
/// `a_vertices[i]` / `b_vertices[j]` give the parent index of local vertex
/// `i` / `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedSubgraph {
    a_vertices: Vec<usize>,
    b_vertices: Vec<usize>,
    adj: Adjacency,
}

impl InducedSubgraph {
    pub fn new(parent: &Adjacency, a: &[usize], b: &[usize]) -> Result<Self, GraphError> {
        let adj = parent.restrict(a, b)?;
        Ok(InducedSubgraph {
            a_vertices: a.to_vec(),
            b_vertices: b.to_vec(),
            adj,
        })
    }

    /// Wraps a standalone bipartite graph; parent indices are the local
    /// ones.
    pub fn standalone(adj: Adjacency) -> Self {
        InducedSubgraph {
            a_vertices: (0..adj.left_len()).collect(),
            b_vertices: (0..adj.right_len()).collect(),
            adj,
        }
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adj
    }

    pub fn a_vertices(&self) -> &[usize] {
        &self.a_vertices
    }

    pub fn b_vertices(&self) -> &[usize] {
        &self.b_vertices
    }

    pub fn a_parent(&self, local: usize) -> usize {
        self.a_vertices[local]
    }

    pub fn b_parent(&self, local: usize) -> usize {
        self.b_vertices[local]
    }

    /// Edges as parent-index pairs.
    pub fn parent_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .edges()
            .map(|(i, j)| (self.a_vertices[i], self.b_vertices[j]))
    }

    pub fn min_degrees(&self) -> Result<DegreeSummary, GraphError> {
        DegreeSummary::of(&self.adj)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BipartiteDigraph, GraphParams};
    use super::*;

    fn c142() -> BipartiteDigraph {
        BipartiteDigraph::circulant(GraphParams::validate(1, 1, 4, 2).unwrap()).unwrap()
    }

    #[test]
    fn full_induction_is_identity() {
        let g = c142();
        let all: Vec<usize> = (0..4).collect();
        let h = g.induce(&all, &all).unwrap();
        assert_eq!(h.parent_edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn empty_induction() {
        let h = c142().induce(&[], &[]).unwrap();
        assert_eq!(h.adjacency().edge_count(), 0);
        assert!(matches!(h.min_degrees(), Err(GraphError::EmptySide)));
    }

    #[test]
    fn partial_induction() {
        let h = c142().induce(&[0, 1], &[1, 2]).unwrap();
        let edges: Vec<_> = h.parent_edges().collect();
        assert_eq!(edges, vec![(0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            c142().induce(&[4], &[0]),
            Err(GraphError::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn degree_summaries() {
        let complete = Adjacency::from_lists(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let s = DegreeSummary::of(&complete).unwrap();
        assert_eq!((s.delta_out, s.delta_in, s.delta), (2, 2, 2));

        let isolated = Adjacency::from_lists(2, vec![vec![0, 1], vec![]]).unwrap();
        assert_eq!(DegreeSummary::of(&isolated).unwrap().delta_out, 0);

        // a1b1, a2b1, a3b1, a3b2, a3b3: out (1,1,3), in (3,1,1)
        let five = Adjacency::from_lists(3, vec![vec![0], vec![0], vec![0, 1, 2]]).unwrap();
        let s = DegreeSummary::of(&five).unwrap();
        assert_eq!((s.delta_out, s.delta_in, s.delta), (1, 1, 1));
    }
}
