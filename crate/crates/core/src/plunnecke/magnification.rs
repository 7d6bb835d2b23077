//! Magnification ratios `D_i(G) = min_{∅ ≠ Z ⊆ X_0} |Γ^{(i)}(Z)| / |Z|`.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::flow::{FlowNetwork, INFINITE};
use super::PlunneckeError;
use crate::graph::LayeredGraph;

/// Largest `|X_0|` accepted by [`magnification_bruteforce`].
pub const BRUTEFORCE_MAX_BASE: usize = 20;

/// Largest candidate set materialized for the binary search; beyond it the
/// flow method iterates ratios of minimizing sets instead.
const MAX_CANDIDATES: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnificationResult {
    pub level: usize,
    #[serde(with = "crate::output::ratio_string")]
    pub value: BigRational,
    /// A nonempty `Z ⊆ X_0` attaining the minimum, sorted.
    pub witness: Vec<usize>,
}

impl MagnificationResult {
    /// Re-checks `|Γ^{(i)}(witness)| / |witness| = value`.
    pub fn verify(&self, g: &LayeredGraph) -> bool {
        if self.witness.is_empty() {
            return false;
        }
        match g.iterated_neighborhood(0, &self.witness, self.level) {
            Ok(reach) => ratio(reach.len(), self.witness.len()) == self.value,
            Err(_) => false,
        }
    }
}

fn ratio(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `Γ^{(i)}({x})` for every `x ∈ X_0`, as bitsets over `X_i`.
fn reach_sets(g: &LayeredGraph, level: usize) -> Result<Vec<FixedBitSet>, PlunneckeError> {
    if level == 0 || level > g.h() {
        return Err(PlunneckeError::LevelOutOfRange { level, h: g.h() });
    }
    let base = g.layer_sizes()[0];
    if base == 0 {
        return Err(PlunneckeError::EmptyBase);
    }
    let top = g.layer_sizes()[level];
    (0..base)
        .map(|x| {
            let reach = g.iterated_neighborhood(0, &[x], level)?;
            let mut bits = FixedBitSet::with_capacity(top);
            reach.into_iter().for_each(|r| bits.insert(r));
            Ok(bits)
        })
        .collect()
}

/// Exhaustive minimum over all `2^{|X_0|} − 1` nonempty subsets; ties go to
/// the lexicographically first subset.
pub fn magnification_bruteforce(
    g: &LayeredGraph,
    level: usize,
) -> Result<MagnificationResult, PlunneckeError> {
    let base = g.layer_sizes()[0];
    if base > BRUTEFORCE_MAX_BASE {
        return Err(PlunneckeError::TooLarge {
            base,
            max: BRUTEFORCE_MAX_BASE,
        });
    }
    let reach = reach_sets(g, level)?;
    let top = g.layer_sizes()[level];
    let mut search = SubsetSearch {
        reach: &reach,
        best: None,
        current: Vec::new(),
    };
    let mut union = FixedBitSet::with_capacity(top);
    search.descend(0, &mut union);
    let (num, den, witness) = search.best.expect("X_0 is nonempty");
    Ok(MagnificationResult {
        level,
        value: ratio(num, den),
        witness,
    })
}

struct SubsetSearch<'a> {
    reach: &'a [FixedBitSet],
    best: Option<(usize, usize, Vec<usize>)>,
    current: Vec<usize>,
}

impl SubsetSearch<'_> {
    /// Visits every nonempty extension of `current` by elements `>= next`.
    fn descend(&mut self, next: usize, union: &mut FixedBitSet) {
        for x in next..self.reach.len() {
            let saved = union.clone();
            union.union_with(&self.reach[x]);
            self.current.push(x);
            self.consider(union.count_ones(..));
            self.descend(x + 1, union);
            self.current.pop();
            *union = saved;
        }
    }

    fn consider(&mut self, reached: usize) {
        let size = self.current.len();
        let better = match &self.best {
            None => true,
            Some((num, den, witness)) => match (reached * den).cmp(&(num * size)) {
                Ordering::Less => true,
                Ordering::Equal => self.current < *witness,
                Ordering::Greater => false,
            },
        };
        if better {
            self.best = Some((reached, size, self.current.clone()));
        }
    }
}

/// The same minimum by parametric minimum cut.
///
/// For `t = p/q`, `min_Z (|Γ^{(i)}(Z)| − t|Z|)` equals `(mincut − p|X_0|)/q`
/// on the network `source → x` (capacity `p`), `x → r` for `r ∈
/// Γ^{(i)}({x})` (unbounded), `r → sink` (capacity `q`). The minimum is
/// nonnegative exactly when `t ≤ D_i`, and `D_i` is one of the fractions
/// `p/q` with `q ≤ |X_0|` and `p ≤ |Γ^{(i)}(X_0)|`, so a binary search over
/// the sorted candidates finds it. The witness is the source side of the
/// minimal cut at a `t` just above `D_i`.
pub fn magnification_flow(
    g: &LayeredGraph,
    level: usize,
) -> Result<MagnificationResult, PlunneckeError> {
    let reach = reach_sets(g, level)?;
    let cut = CutModel::new(&reach);
    let base = reach.len();
    let reach_all = cut.targets.len();

    let value = if base.saturating_mul(reach_all + 1) <= MAX_CANDIDATES {
        let candidates = candidate_fractions(base as u64, reach_all as u64);
        // candidates[0] = 0 is always feasible
        let (mut lo, mut hi) = (0usize, candidates.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let (p, q) = candidates[mid];
            if cut.min_excess(p, q).0 >= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        candidates[lo]
    } else {
        cut.descend_ratios()
    };

    // t' = D + 1/(2N²) separates D from every larger candidate
    let (a, b) = value;
    let n2 = 2 * (base as u64) * (base as u64);
    let (p, q) = (a * n2 + b, b * n2);
    let (excess, witness) = cut.min_excess(p, q);
    debug_assert!(excess < 0);
    debug_assert!(!witness.is_empty());
    Ok(MagnificationResult {
        level,
        value: ratio(a as usize, b as usize),
        witness,
    })
}

/// Distinct fractions `p/q`, `0 ≤ p ≤ max_num`, `1 ≤ q ≤ max_den`, in
/// increasing order, in lowest terms.
fn candidate_fractions(max_den: u64, max_num: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        for p in 0..=max_num {
            if num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_unstable_by(|&(p1, q1), &(p2, q2)| (p1 as u128 * q2 as u128).cmp(&(p2 as u128 * q1 as u128)));
    out
}

struct CutModel {
    /// Per base vertex, indices into `targets`.
    arcs: Vec<Vec<usize>>,
    targets: Vec<usize>,
}

impl CutModel {
    fn new(reach: &[FixedBitSet]) -> Self {
        let mut all = FixedBitSet::with_capacity(reach.first().map_or(0, |r| r.len()));
        for r in reach {
            all.union_with(r);
        }
        let targets: Vec<usize> = all.ones().collect();
        let mut index = vec![usize::MAX; all.len()];
        for (i, &t) in targets.iter().enumerate() {
            index[t] = i;
        }
        let arcs = reach
            .iter()
            .map(|r| r.ones().map(|t| index[t]).collect())
            .collect();
        CutModel { arcs, targets }
    }

    /// `q · min_Z (|Γ(Z)| − (p/q)|Z|)` and the minimal minimizing `Z`.
    fn min_excess(&self, p: u64, q: u64) -> (i64, Vec<usize>) {
        let base = self.arcs.len();
        let source = 0;
        let sink = 1 + base + self.targets.len();
        let mut net = FlowNetwork::new(sink + 1);
        for (x, arcs) in self.arcs.iter().enumerate() {
            net.add_edge(source, 1 + x, p as i64);
            for &r in arcs {
                net.add_edge(1 + x, 1 + base + r, INFINITE);
            }
        }
        for r in 0..self.targets.len() {
            net.add_edge(1 + base + r, sink, q as i64);
        }
        let cut = net.max_flow(source, sink);
        let side = net.source_side(source);
        let witness = (0..base).filter(|&x| side[1 + x]).collect();
        (cut - p as i64 * base as i64, witness)
    }

    /// Iterates `t ← ratio(Z*)` from `t = |Γ(X_0)|/|X_0|` until the minimum
    /// excess is zero.
    fn descend_ratios(&self) -> (u64, u64) {
        let mut t = (self.targets.len() as u64, self.arcs.len() as u64);
        loop {
            let (excess, witness) = self.min_excess(t.0, t.1);
            if excess >= 0 || witness.is_empty() {
                let g = num_integer::gcd(t.0, t.1).max(1);
                return (t.0 / g, t.1 / g);
            }
            let reached = witness
                .iter()
                .flat_map(|&x| self.arcs[x].iter().copied())
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            t = (reached as u64, witness.len() as u64);
        }
    }
}

/// Whether `D_i^{1/i}` is non-increasing, by the exact comparison
/// `D_i^{i+1} ≥ D_{i+1}^i` for consecutive levels.
pub fn plunnecke_monotone_check(values: &[BigRational]) -> Result<bool, PlunneckeError> {
    if let Some(index) = values.iter().position(|v| !v.is_positive()) {
        return Err(PlunneckeError::NonPositiveValue { index: index + 1 });
    }
    Ok(values.windows(2).enumerate().all(|(j, pair)| {
        let i = j + 1;
        let lhs = pow(&pair[0], i + 1);
        let rhs = pow(&pair[1], i);
        lhs >= rhs
    }))
}

fn pow(r: &BigRational, e: usize) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    BigRational::new(
        num_traits::pow(r.numer().clone(), e),
        num_traits::pow(r.denom().clone(), e),
    )
}

/// `k^i` as an exact rational.
pub fn ratio_power(num: u64, den: u64, i: usize) -> BigRational {
    pow(&BigRational::new(BigInt::from(num), BigInt::from(den)), i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Adjacency;
    use num_traits::Zero;

    fn layered(sizes: Vec<usize>, layers: Vec<Vec<Vec<usize>>>) -> LayeredGraph {
        let adjs = layers
            .into_iter()
            .enumerate()
            .map(|(i, l)| Adjacency::from_lists(sizes[i + 1], l).unwrap())
            .collect();
        LayeredGraph::new(sizes, adjs).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn funnel() {
        let g = layered(vec![2, 1], vec![vec![vec![0], vec![0]]]);
        for m in [magnification_bruteforce(&g, 1).unwrap(), magnification_flow(&g, 1).unwrap()] {
            assert_eq!(m.value, r(1, 2));
            assert_eq!(m.witness, vec![0, 1]);
            assert!(m.verify(&g));
        }
    }

    #[test]
    fn identity_layer() {
        let g = layered(vec![3, 3], vec![vec![vec![0], vec![1], vec![2]]]);
        let b = magnification_bruteforce(&g, 1).unwrap();
        assert_eq!(b.value, r(1, 1));
        assert_eq!(b.witness, vec![0]);
        assert_eq!(magnification_flow(&g, 1).unwrap().value, r(1, 1));
    }

    #[test]
    fn complete_two_to_four() {
        let g = layered(vec![2, 4], vec![vec![vec![0, 1, 2, 3]; 2]]);
        for m in [magnification_bruteforce(&g, 1).unwrap(), magnification_flow(&g, 1).unwrap()] {
            assert_eq!(m.value, r(2, 1));
            assert_eq!(m.witness, vec![0, 1]);
        }
    }

    #[test]
    fn single_base_vertex() {
        let g = layered(vec![1, 2, 3], vec![vec![vec![0, 1]], vec![vec![0], vec![2]]]);
        assert_eq!(magnification_flow(&g, 1).unwrap().value, r(2, 1));
        assert_eq!(magnification_flow(&g, 2).unwrap().value, r(2, 1));
        assert_eq!(magnification_bruteforce(&g, 2).unwrap().witness, vec![0]);
    }

    #[test]
    fn isolated_base_vertex_gives_zero() {
        let g = layered(vec![2, 1], vec![vec![vec![0], vec![]]]);
        for m in [magnification_bruteforce(&g, 1).unwrap(), magnification_flow(&g, 1).unwrap()] {
            assert_eq!(m.value, r(0, 1));
            assert_eq!(m.witness, vec![1]);
        }
    }

    #[test]
    fn level_checks() {
        let g = layered(vec![2, 1], vec![vec![vec![0], vec![0]]]);
        assert!(matches!(magnification_flow(&g, 0), Err(PlunneckeError::LevelOutOfRange { .. })));
        assert!(matches!(magnification_flow(&g, 2), Err(PlunneckeError::LevelOutOfRange { .. })));
        let big = layered(vec![21, 1], vec![vec![vec![0]; 21]]);
        assert!(matches!(magnification_bruteforce(&big, 1), Err(PlunneckeError::TooLarge { .. })));
    }

    #[test]
    fn ratio_descent_matches_binary_search() {
        let g = layered(
            vec![4, 5],
            vec![vec![vec![0, 1], vec![1], vec![1, 2, 3], vec![3, 4]]],
        );
        let reach = reach_sets(&g, 1).unwrap();
        let cut = CutModel::new(&reach);
        let (a, b) = cut.descend_ratios();
        assert_eq!(r(a as i64, b as i64), magnification_flow(&g, 1).unwrap().value);
        assert_eq!(r(a as i64, b as i64), magnification_bruteforce(&g, 1).unwrap().value);
    }

    #[test]
    fn candidates_sorted_unique() {
        let c = candidate_fractions(3, 2);
        assert_eq!(c, vec![(0, 1), (1, 3), (1, 2), (2, 3), (1, 1), (2, 1)]);
    }

    #[test]
    fn monotone_check() {
        assert!(plunnecke_monotone_check(&[r(4, 1), r(2, 1)]).unwrap());
        assert!(!plunnecke_monotone_check(&[r(2, 1), r(5, 1)]).unwrap());
        assert!(plunnecke_monotone_check(&[r(3, 2), r(9, 4)]).unwrap());
        assert!(plunnecke_monotone_check(&[r(2, 1), r(4, 1), r(8, 1)]).unwrap());
        assert!(!plunnecke_monotone_check(&[r(2, 1), r(4, 1), r(9, 1)]).unwrap());
        assert!(plunnecke_monotone_check(&[]).unwrap());
        assert!(matches!(
            plunnecke_monotone_check(&[r(1, 1), r(0, 1)]),
            Err(PlunneckeError::NonPositiveValue { index: 2 })
        ));
        assert!(plunnecke_monotone_check(&[r(-1, 1)]).is_err());
        assert_eq!(ratio_power(3, 2, 2), r(9, 4));
        assert!(BigRational::zero() < ratio_power(1, 1, 0));
    }
}
