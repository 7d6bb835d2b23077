//! Maximum matchings in bipartite graphs and Frobenius–König witnesses.
//!
//! All functions take an [`Adjacency`] from a left side `A` to a right side
//! `B` and work with local indices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Adjacency;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("sides have different sizes ({left} vs {right})")]
    UnequalSides { left: usize, right: usize },
}

/// Vertex-disjoint edges `(a, b)`, sorted by `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Every pair is an edge and no vertex is used twice.
    pub fn is_valid_in(&self, adj: &Adjacency) -> bool {
        let mut left = vec![false; adj.left_len()];
        let mut right = vec![false; adj.right_len()];
        self.pairs.iter().all(|&(a, b)| {
            adj.has_edge(a, b)
                && !std::mem::replace(&mut left[a], true)
                && !std::mem::replace(&mut right[b], true)
        })
    }

    pub fn is_perfect_in(&self, adj: &Adjacency) -> bool {
        adj.left_len() == adj.right_len() && self.len() == adj.left_len() && self.is_valid_in(adj)
    }
}

/// Nonempty `S ⊆ A`, `T ⊆ B` with `|S| + |T| = |A| + 1` and no edge from
/// `S` to `T`. Such a pair exists iff there is no perfect matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblematicPair {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl ProblematicPair {
    /// Re-checks the three defining conditions.
    pub fn verify(&self, adj: &Adjacency) -> bool {
        if self.s.is_empty() || self.t.is_empty() {
            return false;
        }
        if self.s.len() + self.t.len() != adj.left_len() + 1 {
            return false;
        }
        if self.s.iter().any(|&a| a >= adj.left_len()) || self.t.iter().any(|&b| b >= adj.right_len()) {
            return false;
        }
        let mut in_t = vec![false; adj.right_len()];
        for &b in &self.t {
            in_t[b] = true;
        }
        self.s
            .iter()
            .all(|&a| adj.neighbors(a).iter().all(|&b| !in_t[b as usize]))
    }
}

const NIL: usize = usize::MAX;

/// Maximum-cardinality matching by layered augmenting paths (Hopcroft–Karp)
/// after a greedy start.
pub fn max_matching(adj: &Adjacency) -> Matching {
    let state = HopcroftKarp::run(adj);
    let pairs = state
        .match_left
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b != NIL)
        .map(|(a, &b)| (a, b))
        .collect();
    Matching { pairs }
}

pub fn has_perfect_matching(adj: &Adjacency) -> Result<bool, MatchingError> {
    check_square(adj)?;
    Ok(HopcroftKarp::run(adj).size == adj.left_len())
}

/// A problematic pair when no perfect matching exists.
///
/// `S` is the set of `A`-vertices reachable by alternating paths from the
/// unmatched `A`-vertices of a maximum matching; then `Γ(S)` is matched
/// into `S` and `|Γ(S)| < |S|`. `T` is the lexicographically first subset
/// of `B ∖ Γ(S)` of the required size.
pub fn find_problematic_pair(adj: &Adjacency) -> Result<Option<ProblematicPair>, MatchingError> {
    check_square(adj)?;
    let state = HopcroftKarp::run(adj);
    if state.size == adj.left_len() {
        return Ok(None);
    }
    let mut in_s = vec![false; adj.left_len()];
    let mut in_gamma = vec![false; adj.right_len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (a, &b) in state.match_left.iter().enumerate() {
        if b == NIL {
            in_s[a] = true;
            queue.push_back(a);
        }
    }
    while let Some(a) = queue.pop_front() {
        for &b in adj.neighbors(a) {
            let b = b as usize;
            if std::mem::replace(&mut in_gamma[b], true) {
                continue;
            }
            let next = state.match_right[b];
            debug_assert_ne!(next, NIL, "maximum matching has no augmenting path");
            if !in_s[next] {
                in_s[next] = true;
                queue.push_back(next);
            }
        }
    }
    let s: Vec<usize> = (0..adj.left_len()).filter(|&a| in_s[a]).collect();
    let t_len = adj.left_len() + 1 - s.len();
    let t: Vec<usize> = (0..adj.right_len())
        .filter(|&b| !in_gamma[b])
        .take(t_len)
        .collect();
    debug_assert_eq!(t.len(), t_len);
    Ok(Some(ProblematicPair { s, t }))
}

fn check_square(adj: &Adjacency) -> Result<(), MatchingError> {
    if adj.left_len() != adj.right_len() {
        return Err(MatchingError::UnequalSides {
            left: adj.left_len(),
            right: adj.right_len(),
        });
    }
    Ok(())
}

struct HopcroftKarp<'a> {
    adj: &'a Adjacency,
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    dist: Vec<u32>,
    next_edge: Vec<usize>,
    size: usize,
}

impl<'a> HopcroftKarp<'a> {
    const INF: u32 = u32::MAX;

    fn run(adj: &'a Adjacency) -> Self {
        let mut hk = HopcroftKarp {
            adj,
            match_left: vec![NIL; adj.left_len()],
            match_right: vec![NIL; adj.right_len()],
            dist: vec![0; adj.left_len()],
            next_edge: vec![0; adj.left_len()],
            size: 0,
        };
        hk.greedy();
        while hk.bfs() {
            hk.next_edge.iter_mut().for_each(|e| *e = 0);
            for a in 0..adj.left_len() {
                if hk.match_left[a] == NIL && hk.dfs(a) {
                    hk.size += 1;
                }
            }
        }
        hk
    }

    fn greedy(&mut self) {
        for a in 0..self.adj.left_len() {
            if let Some(&b) = self
                .adj
                .neighbors(a)
                .iter()
                .find(|&&b| self.match_right[b as usize] == NIL)
            {
                self.match_left[a] = b as usize;
                self.match_right[b as usize] = a;
                self.size += 1;
            }
        }
    }

    /// Layers the free left vertices; true if some augmenting path exists.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for a in 0..self.adj.left_len() {
            if self.match_left[a] == NIL {
                self.dist[a] = 0;
                queue.push_back(a);
            } else {
                self.dist[a] = Self::INF;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &b in self.adj.neighbors(a) {
                let next = self.match_right[b as usize];
                if next == NIL {
                    found = true;
                } else if self.dist[next] == Self::INF {
                    self.dist[next] = self.dist[a] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    }

    fn dfs(&mut self, a: usize) -> bool {
        let row = self.adj.neighbors(a);
        while self.next_edge[a] < row.len() {
            let b = row[self.next_edge[a]] as usize;
            self.next_edge[a] += 1;
            let next = self.match_right[b];
            if next == NIL || (self.dist[next] == self.dist[a] + 1 && self.dfs(next)) {
                self.match_left[a] = b;
                self.match_right[b] = a;
                return true;
            }
        }
        self.dist[a] = Self::INF;
        false
    }
}

/// Saturating matchings on dense graphs stored as bitsets. Used for the
/// many small, dense matching queries of commutativity checks.
pub mod dense {
    /// Scratch space reusable across queries on the same vertex universe.
    pub struct BitMatcher {
        owner: Vec<u32>,
        touched: Vec<u32>,
        visited: Vec<u64>,
        available: Vec<u64>,
    }

    const FREE: u32 = u32::MAX;

    impl BitMatcher {
        /// `left_len` is the size of the universe that left vertices are
        /// drawn from.
        pub fn new(left_len: usize) -> Self {
            let words = left_len.div_ceil(64);
            BitMatcher {
                owner: vec![FREE; left_len],
                touched: Vec::new(),
                visited: vec![0; words],
                available: vec![0; words],
            }
        }

        /// Whether every right vertex `r ∈ right` can be matched to a
        /// distinct left vertex. Right vertex `r` is adjacent to the set
        /// bits of `columns(r) & left_mask`.
        pub fn saturates_right<'c, F>(&mut self, right: &[u32], columns: F, left_mask: &[u64]) -> bool
        where
            F: Fn(u32) -> &'c [u64],
        {
            let words = self.visited.len();
            debug_assert!(left_mask.len() == words);
            for w in self.touched.drain(..) {
                self.owner[w as usize] = FREE;
            }
            self.available.copy_from_slice(left_mask);

            let mut pending = Vec::new();
            for (idx, &r) in right.iter().enumerate() {
                let col = columns(r);
                let hit = (0..words).find_map(|i| {
                    let bits = col[i] & self.available[i];
                    (bits != 0).then(|| i * 64 + bits.trailing_zeros() as usize)
                });
                match hit {
                    Some(w) => {
                        self.available[w / 64] &= !(1u64 << (w % 64));
                        self.owner[w] = idx as u32;
                        self.touched.push(w as u32);
                    }
                    None => pending.push(idx),
                }
            }
            for idx in pending {
                self.visited.iter_mut().for_each(|v| *v = 0);
                if !self.augment(idx, right, &columns, left_mask) {
                    return false;
                }
            }
            true
        }

        fn augment<'c, F>(&mut self, idx: usize, right: &[u32], columns: &F, left_mask: &[u64]) -> bool
        where
            F: Fn(u32) -> &'c [u64],
        {
            let col = columns(right[idx]);
            for i in 0..self.visited.len() {
                loop {
                    let bits = col[i] & left_mask[i] & !self.visited[i];
                    if bits == 0 {
                        break;
                    }
                    let w = i * 64 + bits.trailing_zeros() as usize;
                    self.visited[i] |= 1u64 << (w % 64);
                    let current = self.owner[w];
                    if current == FREE || self.augment(current as usize, right, columns, left_mask) {
                        if current == FREE {
                            self.touched.push(w as u32);
                        }
                        self.owner[w] = idx as u32;
                        return true;
                    }
                }
            }
            false
        }
    }
}
