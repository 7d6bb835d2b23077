use serde::{Deserialize, Serialize};

use super::GraphError;

/// Directed bipartite adjacency from a left side `0..left_len` to a right
/// side `0..right_len`, stored as sorted neighbor lists in CSR layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Adjacency {
    right_len: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    /// Builds from per-vertex neighbor lists. Lists are sorted; duplicates
    /// and out-of-range targets are rejected.
    pub fn from_lists<I, L>(right_len: usize, lists: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = L>,
        L: IntoIterator<Item = usize>,
    {
        let mut offsets = vec![0];
        let mut targets: Vec<u32> = Vec::new();
        for (vertex, list) in lists.into_iter().enumerate() {
            let start = targets.len();
            for t in list {
                if t >= right_len {
                    return Err(GraphError::IndexOutOfRange {
                        index: t,
                        len: right_len,
                    });
                }
                targets.push(t as u32);
            }
            let row = &mut targets[start..];
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge { vertex });
            }
            offsets.push(targets.len());
        }
        Ok(Adjacency {
            right_len,
            offsets,
            targets,
        })
    }

    /// Builds from rows that all have the same length `degree`, laid out
    /// contiguously in `flat`. Rows are sorted in place.
    pub(crate) fn from_regular_rows(
        right_len: usize,
        degree: usize,
        mut flat: Vec<u32>,
    ) -> Result<Self, GraphError> {
        debug_assert!(degree == 0 || flat.len().is_multiple_of(degree));
        let rows = flat.len().checked_div(degree).unwrap_or(0);
        for (vertex, row) in flat.chunks_mut(degree.max(1)).enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge { vertex });
            }
            if let Some(&last) = row.last() {
                if last as usize >= right_len {
                    return Err(GraphError::IndexOutOfRange {
                        index: last as usize,
                        len: right_len,
                    });
                }
            }
        }
        let offsets = (0..=rows).map(|i| i * degree).collect();
        Ok(Adjacency {
            right_len,
            offsets,
            targets: flat,
        })
    }

    pub fn empty(left_len: usize, right_len: usize) -> Self {
        Adjacency {
            right_len,
            offsets: vec![0; left_len + 1],
            targets: Vec::new(),
        }
    }

    pub fn left_len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn neighbors(&self, left: usize) -> &[u32] {
        &self.targets[self.offsets[left]..self.offsets[left + 1]]
    }

    pub fn degree(&self, left: usize) -> usize {
        self.offsets[left + 1] - self.offsets[left]
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        left < self.left_len() && self.neighbors(left).binary_search(&(right as u32)).is_ok()
    }

    /// All edges `(left, right)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.left_len()).flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v as usize)))
    }

    /// In-degree of every right vertex.
    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right_len];
        for &t in &self.targets {
            deg[t as usize] += 1;
        }
        deg
    }

    /// The reverse adjacency (right → left), also with sorted lists.
    pub fn transpose(&self) -> Adjacency {
        let deg = self.right_degrees();
        let mut offsets = Vec::with_capacity(self.right_len + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..self.right_len].to_vec();
        let mut targets = vec![0u32; self.targets.len()];
        // rows are visited in increasing order, so every reversed list
        // comes out sorted
        for u in 0..self.left_len() {
            for &v in self.neighbors(u) {
                targets[fill[v as usize]] = u as u32;
                fill[v as usize] += 1;
            }
        }
        Adjacency {
            right_len: self.left_len(),
            offsets,
            targets,
        }
    }

    /// Union of the neighbor lists of `set`, sorted.
    pub fn neighborhood(&self, set: &[usize]) -> Result<Vec<usize>, GraphError> {
        let mut seen = vec![false; self.right_len];
        for &u in set {
            if u >= self.left_len() {
                return Err(GraphError::IndexOutOfRange {
                    index: u,
                    len: self.left_len(),
                });
            }
            for &v in self.neighbors(u) {
                seen[v as usize] = true;
            }
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect())
    }

    /// Sub-adjacency on `left × right` with local indices.
    pub fn restrict(&self, left: &[usize], right: &[usize]) -> Result<Adjacency, GraphError> {
        let mut local = vec![u32::MAX; self.right_len];
        for (i, &v) in right.iter().enumerate() {
            if v >= self.right_len {
                return Err(GraphError::IndexOutOfRange {
                    index: v,
                    len: self.right_len,
                });
            }
            if local[v] != u32::MAX {
                return Err(GraphError::DuplicateVertex { index: v });
            }
            local[v] = i as u32;
        }
        let mut seen_left = vec![false; self.left_len()];
        let mut lists = Vec::with_capacity(left.len());
        for &u in left {
            if u >= self.left_len() {
                return Err(GraphError::IndexOutOfRange {
                    index: u,
                    len: self.left_len(),
                });
            }
            if std::mem::replace(&mut seen_left[u], true) {
                return Err(GraphError::DuplicateVertex { index: u });
            }
            let row: Vec<usize> = self
                .neighbors(u)
                .iter()
                .filter_map(|&v| {
                    let l = local[v as usize];
                    (l != u32::MAX).then_some(l as usize)
                })
                .collect();
            lists.push(row);
        }
        Adjacency::from_lists(right.len(), lists)
    }
}
