//! Sampling from `G(k, n, d)`.
//!
//! * [`sample_pairing`] is exactly uniform: `kd·n` out-stubs are matched to
//!   `d·kn` in-stubs by a uniform permutation, and the draw is repeated
//!   until the result is simple. Every simple graph arises from the same
//!   number of permutations, so conditioning on simplicity gives the
//!   uniform distribution.
//! * [`sample_switch_chain`] runs the switch chain for a fixed number of
//!   accepted switchings. It is approximately uniform.
//! * [`enumerate_family`] lists tiny families exhaustively and serves as
//!   ground truth for both.

use std::collections::HashSet;
use std::fmt;
use std::num::NonZeroU64;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::graph::{BipartiteDigraph, GraphError, GraphParams};
use crate::rng::{Rng, Seed};

/// Largest `(d-1)(kd-1)` for which rejection sampling is attempted. The
/// acceptance rate is about `exp(-(d-1)(kd-1)/2)`, so this keeps the
/// expected number of attempts below ~10^4.
pub const PAIRING_GUARD: usize = 18;

/// Hard cap on attempts for a single rejection draw.
const MAX_PAIRING_ATTEMPTS: u64 = 50_000_000;

/// Largest `kn` accepted by [`enumerate_family`].
pub const ENUMERATION_MAX_KN: usize = 8;

/// Largest family [`enumerate_family`] will materialize.
pub const ENUMERATION_MAX_MEMBERS: usize = 1_000_000;

/// Accepted switchings per edge in the default chain length.
pub const DEFAULT_SWITCHES_PER_EDGE: u64 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(
        "rejection sampling infeasible for {params}: (d-1)(kd-1) = {product} exceeds {PAIRING_GUARD}; use the switch chain"
    )]
    RejectionInfeasible { params: GraphParams, product: usize },
    #[error("no simple pairing found in {attempts} attempts")]
    RejectionExhausted { attempts: u64 },
    #[error("family too large to enumerate: {reason}")]
    TooLarge { reason: String },
    #[error("need at least {needed} samples for {family_size} outcomes, got {got}")]
    InsufficientSamples {
        needed: u64,
        got: u64,
        family_size: usize,
    },
    #[error("{counts} counts given for a family of size {family_size}")]
    LengthMismatch { counts: usize, family_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SamplerMethod {
    PairingRejection,
    /// `steps` accepted switchings; `None` means
    /// [`default_chain_steps`].
    SwitchChain { steps: Option<NonZeroU64> },
    Circulant,
}

impl SamplerMethod {
    pub fn default_chain() -> Self {
        SamplerMethod::SwitchChain { steps: None }
    }
}

impl fmt::Display for SamplerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerMethod::PairingRejection => write!(f, "pairing"),
            SamplerMethod::SwitchChain { steps: None } => write!(f, "switch"),
            SamplerMethod::SwitchChain { steps: Some(s) } => write!(f, "switch({s})"),
            SamplerMethod::Circulant => write!(f, "circulant"),
        }
    }
}

impl FromStr for SamplerMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pairing" => Ok(SamplerMethod::PairingRejection),
            "switch" => Ok(SamplerMethod::default_chain()),
            "circulant" => Ok(SamplerMethod::Circulant),
            other => Err(format!(
                "unknown sampler `{other}` (expected pairing, switch or circulant)"
            )),
        }
    }
}

/// Draws one graph with the given method.
pub fn sample(
    params: GraphParams,
    method: SamplerMethod,
    seed: Seed,
) -> Result<BipartiteDigraph, SampleError> {
    match method {
        SamplerMethod::PairingRejection => sample_pairing(params, seed),
        SamplerMethod::SwitchChain { steps } => {
            let steps = steps.map_or_else(|| default_chain_steps(&params), NonZeroU64::get);
            Ok(sample_switch_chain(params, seed, steps))
        }
        SamplerMethod::Circulant => Ok(BipartiteDigraph::circulant(params)?),
    }
}

pub fn pairing_feasible(params: &GraphParams) -> bool {
    pairing_product(params) <= PAIRING_GUARD
}

fn pairing_product(params: &GraphParams) -> usize {
    (params.d() - 1) * (params.kd() - 1)
}

/// `20·|E|` accepted switchings.
pub fn default_chain_steps(params: &GraphParams) -> u64 {
    DEFAULT_SWITCHES_PER_EDGE * params.edge_count() as u64
}

/// Exactly uniform sample from `G(k, n, d)` by rejection from the pairing
/// model.
pub fn sample_pairing(params: GraphParams, seed: Seed) -> Result<BipartiteDigraph, SampleError> {
    let product = pairing_product(&params);
    if product > PAIRING_GUARD {
        return Err(SampleError::RejectionInfeasible { params, product });
    }
    let mut rng = seed.rng();
    let mut pairing = Pairing::new(params);
    for attempt in 1..=MAX_PAIRING_ATTEMPTS {
        if pairing.try_shuffle(&mut rng, attempt) {
            return Ok(BipartiteDigraph::from_flat_rows(params, pairing.stubs)?);
        }
    }
    Err(SampleError::RejectionExhausted {
        attempts: MAX_PAIRING_ATTEMPTS,
    })
}

struct Pairing {
    kd: usize,
    /// Position `s` is out-stub `s` of `y = s / kd`; the value is the
    /// `z` whose in-stub it is paired with.
    stubs: Vec<u32>,
    /// Last (attempt, y) that used each `z`, packed.
    stamp: Vec<u64>,
}

impl Pairing {
    fn new(params: GraphParams) -> Self {
        let kn = params.kn();
        Pairing {
            kd: params.kd(),
            stubs: (0..params.edge_count()).map(|s| (s % kn) as u32).collect(),
            stamp: vec![0; kn],
        }
    }

    /// One Fisher–Yates pass, abandoned as soon as some `y` receives the
    /// same `z` twice. Returns whether the full pairing is simple.
    fn try_shuffle(&mut self, rng: &mut Rng, attempt: u64) -> bool {
        let len = self.stubs.len();
        let rows = (len / self.kd.max(1)) as u64;
        for i in 0..len {
            let j = rng.random_range(i..len);
            self.stubs.swap(i, j);
            let z = self.stubs[i] as usize;
            let tag = attempt * (rows + 1) + (i / self.kd) as u64 + 1;
            if self.stamp[z] == tag {
                return false;
            }
            self.stamp[z] = tag;
        }
        true
    }
}

/// Runs the switch chain for `steps` accepted switchings, then for `steps`
/// further proposals. The chain starts from the circulant graph when `k` is
/// an integer and from [`BipartiteDigraph::cyclic`] otherwise.
///
/// Each proposal picks two edge slots `(a, c)` and `(b, d)` uniformly at
/// random and applies the `{ac, bd}`-switching when `ad` and `bc` are
/// absent; invalid proposals leave the graph unchanged. The proposal chain
/// is symmetric, so its stationary law is uniform. Reading the state right
/// after an acceptance would instead weight each graph by its number of
/// valid switchings, hence the second phase of fixed length.
pub fn sample_switch_chain(params: GraphParams, seed: Seed, steps: u64) -> BipartiteDigraph {
    let start = BipartiteDigraph::circulant(params).unwrap_or_else(|_| BipartiteDigraph::cyclic(params));
    let mut chain = SwitchChain::new(&start);
    let mut rng = seed.rng();
    chain.run(&mut rng, steps);
    chain.run_proposals(&mut rng, steps);
    chain.into_graph()
}

/// Mutable working state of the switch chain.
pub struct SwitchChain {
    params: GraphParams,
    slots: Vec<u32>,
    edges: EdgeSet,
    accepted: u64,
    proposed: u64,
}

enum EdgeSet {
    Bits { kn: usize, bits: FixedBitSet },
    Hashed { kn: usize, set: HashSet<u64> },
}

impl EdgeSet {
    const MAX_BITS: usize = 1 << 28;

    fn new(n: usize, kn: usize) -> Self {
        match n.checked_mul(kn) {
            Some(cells) if cells <= Self::MAX_BITS => EdgeSet::Bits {
                kn,
                bits: FixedBitSet::with_capacity(cells),
            },
            _ => EdgeSet::Hashed {
                kn,
                set: HashSet::new(),
            },
        }
    }

    #[inline]
    fn contains(&self, y: usize, z: usize) -> bool {
        match self {
            EdgeSet::Bits { kn, bits } => bits.contains(y * kn + z),
            EdgeSet::Hashed { kn, set } => set.contains(&((y * kn + z) as u64)),
        }
    }

    #[inline]
    fn set(&mut self, y: usize, z: usize, present: bool) {
        match self {
            EdgeSet::Bits { kn, bits } => bits.set(y * *kn + z, present),
            EdgeSet::Hashed { kn, set } => {
                let key = (y * *kn + z) as u64;
                if present {
                    set.insert(key);
                } else {
                    set.remove(&key);
                }
            }
        }
    }
}

impl SwitchChain {
    pub fn new(start: &BipartiteDigraph) -> Self {
        let params = *start.params();
        let mut edges = EdgeSet::new(params.n(), params.kn());
        let mut slots = Vec::with_capacity(params.edge_count());
        for (y, z) in start.edges() {
            edges.set(y, z, true);
            slots.push(z as u32);
        }
        SwitchChain {
            params,
            slots,
            edges,
            accepted: 0,
            proposed: 0,
        }
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn proposed(&self) -> u64 {
        self.proposed
    }

    /// Whether any switching is possible at all. Only complete graphs
    /// (`d = n`) are frozen: otherwise two rows differ and the differing
    /// entries give a valid switching.
    pub fn is_frozen(&self) -> bool {
        self.params.d() == self.params.n()
    }

    /// Proposes one switching; returns whether it was applied.
    pub fn propose(&mut self, rng: &mut Rng) -> bool {
        let proposal = self.draw(rng);
        self.apply(proposal)
    }

    /// Applies `steps` more accepted switchings.
    pub fn run(&mut self, rng: &mut Rng, steps: u64) {
        if self.is_frozen() {
            return;
        }
        let target = self.accepted + steps;
        self.drive(rng, |chain| chain.accepted < target);
        debug_assert!(self.degrees_intact(), "switching broke biregularity");
    }

    /// Makes exactly `proposals` proposals, accepted or not.
    pub fn run_proposals(&mut self, rng: &mut Rng, proposals: u64) {
        if self.is_frozen() {
            return;
        }
        let target = self.proposed + proposals;
        self.drive(rng, |chain| chain.proposed < target);
    }

    /// Two uniformly random edge slots.
    #[inline]
    fn draw(&self, rng: &mut Rng) -> (usize, usize) {
        let len = self.slots.len();
        (rng.random_range(0..len), rng.random_range(0..len))
    }

    #[inline]
    fn apply(&mut self, (e1, e2): (usize, usize)) -> bool {
        let kd = self.params.kd();
        self.proposed += 1;
        let (a, b) = (e1 / kd, e2 / kd);
        let (c, d) = (self.slots[e1] as usize, self.slots[e2] as usize);
        if a == b || c == d || self.edges.contains(a, d) || self.edges.contains(b, c) {
            return false;
        }
        self.edges.set(a, c, false);
        self.edges.set(b, d, false);
        self.edges.set(a, d, true);
        self.edges.set(b, c, true);
        self.slots[e1] = d as u32;
        self.slots[e2] = c as u32;
        self.accepted += 1;
        true
    }

    /// Applies proposals while `keep_going` holds. Proposals are drawn two
    /// ahead of the one being applied so that the memory they touch can be
    /// requested early; the applied sequence is the drawn sequence.
    fn drive(&mut self, rng: &mut Rng, keep_going: impl Fn(&Self) -> bool) {
        let mut current = self.draw(rng);
        prefetch(&self.slots, current.0);
        prefetch(&self.slots, current.1);
        let mut next = self.draw(rng);
        prefetch(&self.slots, next.0);
        prefetch(&self.slots, next.1);
        self.prefetch_edges(current);
        while keep_going(self) {
            let after = self.draw(rng);
            prefetch(&self.slots, after.0);
            prefetch(&self.slots, after.1);
            self.prefetch_edges(next);
            self.apply(current);
            current = next;
            next = after;
        }
    }

    /// Requests the edge-set words a proposal will read or write. Slots may
    /// change before the proposal is applied; this is only a hint.
    #[inline]
    fn prefetch_edges(&self, (e1, e2): (usize, usize)) {
        if let EdgeSet::Bits { kn, bits } = &self.edges {
            let kd = self.params.kd();
            let (a, b) = (e1 / kd, e2 / kd);
            let (c, d) = (self.slots[e1] as usize, self.slots[e2] as usize);
            let words = bits.as_slice();
            for cell in [a * kn + c, a * kn + d, b * kn + c, b * kn + d] {
                prefetch(words, cell / usize::BITS as usize);
            }
        }
    }

    fn degrees_intact(&self) -> bool {
        let kd = self.params.kd();
        let mut indeg = vec![0usize; self.params.kn()];
        for (y, row) in self.slots.chunks(kd).enumerate() {
            for &z in row {
                indeg[z as usize] += 1;
                if !self.edges.contains(y, z as usize) {
                    return false;
                }
            }
        }
        indeg.iter().all(|&deg| deg == self.params.d())
    }

    pub fn to_graph(&self) -> BipartiteDigraph {
        BipartiteDigraph::from_flat_rows(self.params, self.slots.clone())
            .expect("switch chain preserves biregularity")
    }

    pub fn into_graph(self) -> BipartiteDigraph {
        BipartiteDigraph::from_flat_rows(self.params, self.slots)
            .expect("switch chain preserves biregularity")
    }
}

/// Every member of `G(k, n, d)`, each once, in lexicographic order of
/// their out-neighbor lists.
pub fn enumerate_family(params: GraphParams) -> Result<Vec<BipartiteDigraph>, SampleError> {
    if params.kn() > ENUMERATION_MAX_KN {
        return Err(SampleError::TooLarge {
            reason: format!("kn = {} exceeds {ENUMERATION_MAX_KN}", params.kn()),
        });
    }
    let mut search = FamilySearch {
        params,
        capacity: vec![params.d(); params.kn()],
        rows: Vec::with_capacity(params.edge_count()),
        found: Vec::new(),
    };
    search.extend_row(0, 0)?;
    Ok(search.found)
}

struct FamilySearch {
    params: GraphParams,
    capacity: Vec<usize>,
    /// Chosen out-neighbors so far, flattened row by row.
    rows: Vec<u32>,
    found: Vec<BipartiteDigraph>,
}

impl FamilySearch {
    /// Chooses the remaining entries of row `y`, all `>= from`.
    fn extend_row(&mut self, y: usize, from: usize) -> Result<(), SampleError> {
        let (n, kd, kn) = (self.params.n(), self.params.kd(), self.params.kn());
        if y == n {
            if self.found.len() >= ENUMERATION_MAX_MEMBERS {
                return Err(SampleError::TooLarge {
                    reason: format!("more than {ENUMERATION_MAX_MEMBERS} members"),
                });
            }
            let g = BipartiteDigraph::from_flat_rows(self.params, self.rows.clone())?;
            self.found.push(g);
            return Ok(());
        }
        let chosen = self.rows.len() - y * kd;
        if chosen == kd {
            // every z must still fit into the rows that remain
            let rows_left = n - y - 1;
            if self.capacity.iter().any(|&c| c > rows_left) {
                return Ok(());
            }
            return self.extend_row(y + 1, 0);
        }
        let still_needed = kd - chosen;
        for z in from..=kn - still_needed {
            if self.capacity[z] == 0 {
                continue;
            }
            self.capacity[z] -= 1;
            self.rows.push(z as u32);
            let result = self.extend_row(y, z + 1);
            self.rows.pop();
            self.capacity[z] += 1;
            result?;
        }
        Ok(())
    }
}

#[inline]
fn prefetch<T>(data: &[T], index: usize) {
    #[cfg(target_arch = "x86_64")]
    if let Some(item) = data.get(index) {
        // SAFETY: a prefetch hint has no observable effect and the address
        // lies inside `data`.
        #[allow(unused_unsafe)]
        unsafe {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            _mm_prefetch::<_MM_HINT_T0>((item as *const T).cast::<i8>());
        }
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (data, index);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of `observed` against the uniform distribution
/// on `family_size` outcomes.
pub fn uniformity_chisq(observed: &[u64], family_size: usize) -> Result<ChiSquareTest, SampleError> {
    if observed.len() != family_size {
        return Err(SampleError::LengthMismatch {
            counts: observed.len(),
            family_size,
        });
    }
    let total: u64 = observed.iter().sum();
    let needed = 5 * family_size as u64;
    if total < needed || total == 0 {
        return Err(SampleError::InsufficientSamples {
            needed: needed.max(1),
            got: total,
            family_size,
        });
    }
    let expected = total as f64 / family_size as f64;
    let statistic: f64 = observed
        .iter()
        .map(|&o| {
            let diff = o as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let dof = family_size - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
            .clamp(0.0, 1.0)
    };
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, HashMap, VecDeque};

    use super::*;

    fn params(n: usize, d: usize) -> GraphParams {
        GraphParams::validate(1, 1, n, d).unwrap()
    }

    /// Independent count of 0-1 matrices with given row and column sums.
    fn count_matrices(rows: usize, cols: usize, row_sum: usize, col_sum: usize) -> usize {
        let mut count = 0;
        let total = rows * cols;
        for mask in 0u64..(1 << total) {
            let row_ok = (0..rows).all(|r| ((mask >> (r * cols)) & ((1 << cols) - 1)).count_ones() as usize == row_sum);
            let col_ok = (0..cols).all(|c| (0..rows).filter(|r| mask >> (r * cols + c) & 1 == 1).count() == col_sum);
            if row_ok && col_ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn family_sizes() {
        assert_eq!(enumerate_family(params(2, 1)).unwrap().len(), 2);
        assert_eq!(enumerate_family(params(3, 1)).unwrap().len(), 6);
        assert_eq!(enumerate_family(params(3, 2)).unwrap().len(), 6);
        assert_eq!(enumerate_family(params(4, 2)).unwrap().len(), count_matrices(4, 4, 2, 2));
        let p = GraphParams::validate(3, 2, 4, 2).unwrap();
        assert_eq!(enumerate_family(p).unwrap().len(), count_matrices(4, 6, 3, 2));
        let p = GraphParams::family(2, 1, 2, 2).unwrap();
        assert_eq!(enumerate_family(p).unwrap().len(), 1);
    }

    #[test]
    fn family_is_sorted_unique_biregular() {
        let fam = enumerate_family(params(4, 2)).unwrap();
        assert!(fam.windows(2).all(|w| w[0].out_adjacency() < w[1].out_adjacency()));
        assert!(fam.iter().all(BipartiteDigraph::is_biregular));
    }

    #[test]
    fn family_too_large() {
        assert!(matches!(
            enumerate_family(params(9, 1)),
            Err(SampleError::TooLarge { .. })
        ));
    }

    #[test]
    fn pairing_is_deterministic() {
        let p = params(10, 3);
        assert_eq!(sample_pairing(p, Seed(5)).unwrap(), sample_pairing(p, Seed(5)).unwrap());
        assert_ne!(sample_pairing(p, Seed(5)).unwrap(), sample_pairing(p, Seed(6)).unwrap());
    }

    #[test]
    fn pairing_guard() {
        let p = params(100, 6);
        assert!(!pairing_feasible(&p));
        assert!(matches!(
            sample_pairing(p, Seed(1)),
            Err(SampleError::RejectionInfeasible { product: 25, .. })
        ));
    }

    fn frequency_test(p: GraphParams, draws: u64, method: SamplerMethod) -> ChiSquareTest {
        let fam = enumerate_family(p).unwrap();
        let index: HashMap<_, _> = fam.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut counts = vec![0u64; fam.len()];
        for t in 0..draws {
            let g = sample(p, method, Seed(99).derive(t)).unwrap();
            counts[index[&g]] += 1;
        }
        uniformity_chisq(&counts, fam.len()).unwrap()
    }

    #[test]
    fn pairing_uniform_small() {
        assert!(frequency_test(params(2, 1), 6000, SamplerMethod::PairingRejection).p_value > 0.001);
        assert!(frequency_test(params(3, 1), 6000, SamplerMethod::PairingRejection).p_value > 0.001);
    }

    #[test]
    fn pairing_uniform_rational_k() {
        let p = GraphParams::validate(3, 2, 4, 2).unwrap();
        let fam_size = enumerate_family(p).unwrap().len() as u64;
        let test = frequency_test(p, 20 * fam_size, SamplerMethod::PairingRejection);
        assert!(test.p_value > 0.001, "{test:?}");
    }

    #[test]
    fn chain_mixes_on_small_family() {
        let test = frequency_test(params(4, 2), 9000, SamplerMethod::default_chain());
        assert!(test.p_value > 0.001, "{test:?}");
    }

    #[test]
    fn chain_zero_steps_is_start() {
        let p = params(5, 2);
        assert_eq!(sample_switch_chain(p, Seed(3), 0), BipartiteDigraph::circulant(p).unwrap());
        let q = GraphParams::validate(3, 2, 4, 2).unwrap();
        assert_eq!(sample_switch_chain(q, Seed(3), 0), BipartiteDigraph::cyclic(q));
    }

    #[test]
    fn chain_preserves_degrees() {
        for (k, n, d) in [(1, 20, 4), (2, 15, 3), (3, 10, 2)] {
            let p = GraphParams::validate(k, 1, n, d).unwrap();
            let start = BipartiteDigraph::circulant(p).unwrap();
            let mut chain = SwitchChain::new(&start);
            let mut rng = Seed(11).rng();
            for _ in 0..50 {
                chain.run(&mut rng, 7);
                assert!(chain.degrees_intact());
                assert!(chain.to_graph().is_biregular());
            }
            assert_eq!(chain.accepted(), 350);
        }
    }

    #[test]
    fn chain_frozen_on_complete_graph() {
        let p = params(3, 3);
        let g = sample_switch_chain(p, Seed(1), 100);
        assert_eq!(g, BipartiteDigraph::circulant(p).unwrap());
    }

    #[test]
    fn switch_graph_connects_family() {
        // breadth-first search over the switch moves from the identity
        let p = params(3, 1);
        let fam: BTreeSet<_> = enumerate_family(p).unwrap().into_iter().collect();
        let start = BipartiteDigraph::circulant(p).unwrap();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(g) = queue.pop_front() {
            for (a, c) in g.edges() {
                for (b, d) in g.edges() {
                    if let Ok(h) = g.apply_switching(a, b, c, d) {
                        if seen.insert(h.clone()) {
                            queue.push_back(h);
                        }
                    }
                }
            }
        }
        assert_eq!(seen, fam);
    }

    #[test]
    fn chisq_values() {
        let t = uniformity_chisq(&[100; 6], 6).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-12);
        let t = uniformity_chisq(&[600, 0, 0, 0, 0, 0], 6).unwrap();
        assert!((t.statistic - 3000.0).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&t.p_value));
        assert!(t.p_value < 1e-100);
        assert!(matches!(
            uniformity_chisq(&[1, 2, 1], 3),
            Err(SampleError::InsufficientSamples { .. })
        ));
        assert!(matches!(
            uniformity_chisq(&[10, 10], 3),
            Err(SampleError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("pairing".parse::<SamplerMethod>().unwrap(), SamplerMethod::PairingRejection);
        assert_eq!("switch".parse::<SamplerMethod>().unwrap(), SamplerMethod::default_chain());
        assert!("mcmc".parse::<SamplerMethod>().is_err());
    }
}
