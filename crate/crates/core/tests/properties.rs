use bireg_core::experiments::{sweep_matching, Mode, SubsetPolicy};
use bireg_core::format::{parse_graph, write_bipartite, write_layered, GraphFile};
use bireg_core::matching::{find_problematic_pair, has_perfect_matching, max_matching};
use bireg_core::plunnecke::{
    build_random_layered, check_commutative, check_edge_condition, magnification_bruteforce,
    magnification_flow, plunnecke_monotone_check, ratio_power, CheckOptions, Condition, LayerEdge,
};
use bireg_core::sampler::{self, SamplerMethod};
use bireg_core::{Adjacency, BipartiteDigraph, GraphParams, LayeredGraph, Ratio, Seed};
use proptest::prelude::*;
use rand::Rng as _;

fn adjacency(left: usize, right: usize, cells: &[bool]) -> Adjacency {
    let lists: Vec<Vec<usize>> = (0..left)
        .map(|a| (0..right).filter(|&b| cells[a * right + b]).collect())
        .collect();
    Adjacency::from_lists(right, lists).unwrap()
}

fn square_graph() -> impl Strategy<Value = Adjacency> {
    (1usize..=8)
        .prop_flat_map(|m| (Just(m), prop::collection::vec(prop::bool::weighted(0.35), m * m)))
        .prop_map(|(m, cells)| adjacency(m, m, &cells))
}

fn neighborhood_mask(adj: &Adjacency, set: u32) -> u32 {
    (0..adj.left_len())
        .filter(|a| set >> a & 1 == 1)
        .flat_map(|a| adj.neighbors(a).iter().map(|&b| 1u32 << b))
        .fold(0, |acc, bit| acc | bit)
}

/// A problematic pair exists iff some nonempty `S` has `|Γ(S)| < |S|`: then
/// `T` can be any `|A| + 1 − |S|` vertices outside `Γ(S)`.
fn exhaustive_pair_exists(adj: &Adjacency) -> bool {
    let m = adj.left_len();
    (1u32..1 << m).any(|s| {
        let gamma = neighborhood_mask(adj, s).count_ones() as usize;
        let outside = m - gamma;
        let needed = m + 1 - s.count_ones() as usize;
        needed >= 1 && outside >= needed
    })
}

/// Maximum matching size by dynamic programming over used right vertices.
fn brute_matching_size(adj: &Adjacency) -> usize {
    fn best(adj: &Adjacency, a: usize, used: u32) -> usize {
        if a == adj.left_len() {
            return 0;
        }
        let skip = best(adj, a + 1, used);
        adj.neighbors(a)
            .iter()
            .filter(|&&b| used >> b & 1 == 0)
            .map(|&b| 1 + best(adj, a + 1, used | 1 << b))
            .fold(skip, usize::max)
    }
    best(adj, 0, 0)
}

fn layered_graph() -> impl Strategy<Value = LayeredGraph> {
    (1usize..=3, prop::collection::vec(1usize..=10, 4))
        .prop_flat_map(|(h, sizes)| {
            let sizes: Vec<usize> = sizes[..=h].to_vec();
            let cells: Vec<_> = (0..h)
                .map(|i| prop::collection::vec(prop::bool::weighted(0.3), sizes[i] * sizes[i + 1]))
                .collect();
            (Just(sizes), cells)
        })
        .prop_map(|(sizes, cells)| {
            let layers = (0..sizes.len() - 1)
                .map(|i| adjacency(sizes[i], sizes[i + 1], &cells[i]))
                .collect();
            LayeredGraph::new(sizes, layers).unwrap()
        })
}

/// Whether every vertex of `right` can be matched to a distinct vertex of
/// `left` along edges of `layer`, by trying all injective assignments.
fn saturates_by_scan(layer: &Adjacency, left: &[u32], right: &[u32]) -> bool {
    fn assign(layer: &Adjacency, left: &[u32], right: &[u32], used: &mut Vec<bool>) -> bool {
        let Some((&w, rest)) = right.split_first() else {
            return true;
        };
        for (i, &x) in left.iter().enumerate() {
            if !used[i] && layer.has_edge(x as usize, w as usize) {
                used[i] = true;
                if assign(layer, left, rest, used) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    assign(layer, left, right, &mut vec![false; left.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn problematic_pair_iff_no_perfect_matching(adj in square_graph()) {
        let matched = has_perfect_matching(&adj).unwrap();
        let pair = find_problematic_pair(&adj).unwrap();
        prop_assert_eq!(pair.is_some(), !matched);
        prop_assert_eq!(exhaustive_pair_exists(&adj), !matched);
        if let Some(pair) = pair {
            prop_assert!(pair.verify(&adj));
        }
    }

    #[test]
    fn maximum_matching_is_maximum(adj in square_graph()) {
        let m = max_matching(&adj);
        prop_assert!(m.is_valid_in(&adj));
        prop_assert_eq!(m.len(), brute_matching_size(&adj));
    }

    #[test]
    fn flow_equals_bruteforce(g in layered_graph()) {
        for level in 1..=g.h() {
            let brute = magnification_bruteforce(&g, level).unwrap();
            let flow = magnification_flow(&g, level).unwrap();
            prop_assert_eq!(&flow.value, &brute.value);
            prop_assert!(flow.verify(&g));
            prop_assert!(brute.verify(&g));
        }
    }

    #[test]
    fn downward_is_upward_of_reverse(g in layered_graph()) {
        let h = g.h();
        let reversed = g.reversed();
        for layer in 2..=h {
            for (u, v) in g.layer(layer).edges() {
                let down = check_edge_condition(&g, LayerEdge { layer, u, v }, Condition::Downward).unwrap();
                let mirrored = LayerEdge { layer: h - layer + 1, u: v, v: u };
                let up = check_edge_condition(&reversed, mirrored, Condition::Upward).unwrap();
                prop_assert_eq!(down, up);
            }
        }
    }

    #[test]
    fn report_matches_single_edge_checks(g in layered_graph()) {
        let report = check_commutative(&g, CheckOptions::default());
        let h = g.h();
        let mut up = Vec::new();
        let mut down = Vec::new();
        let mut checked = 0;
        for layer in 1..=h {
            for (u, v) in g.layer(layer).edges() {
                let e = LayerEdge { layer, u, v };
                if layer < h {
                    checked += 1;
                    if !check_edge_condition(&g, e, Condition::Upward).unwrap() {
                        up.push(e);
                    }
                }
                if layer > 1 {
                    checked += 1;
                    if !check_edge_condition(&g, e, Condition::Downward).unwrap() {
                        down.push(e);
                    }
                }
            }
        }
        up.sort();
        down.sort();
        prop_assert_eq!(&report.upward_violations, &up);
        prop_assert_eq!(&report.downward_violations, &down);
        prop_assert_eq!(report.edges_checked, checked);
        prop_assert_eq!(report.commutative, up.is_empty() && down.is_empty());
    }

    #[test]
    fn edge_condition_matches_permutation_scan(m in 4usize..=8, d in 2usize..=6, seed in any::<u64>()) {
        prop_assume!(d <= m);
        let k = Ratio::integer(1).unwrap();
        let g = build_random_layered(k, m, d, 2, Seed(seed), SamplerMethod::default_chain()).unwrap();
        for (u, v) in g.layer(1).edges() {
            let fast = check_edge_condition(&g, LayerEdge { layer: 1, u, v }, Condition::Upward).unwrap();
            let slow = saturates_by_scan(g.layer(2), g.layer(1).neighbors(u), g.layer(2).neighbors(v));
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn biregular_magnification_is_k_power(choice in 0usize..3, seed in any::<u64>()) {
        let (k, m, d) = [(Ratio::integer(1).unwrap(), 6, 3), (Ratio::integer(2).unwrap(), 4, 2), (Ratio::new(3, 2).unwrap(), 4, 2)][choice];
        let g = build_random_layered(k, m, d, 2, Seed(seed), SamplerMethod::default_chain()).unwrap();
        let values: Vec<_> = (1..=2).map(|i| magnification_flow(&g, i).unwrap().value).collect();
        for (i, value) in values.iter().enumerate() {
            prop_assert_eq!(value, &ratio_power(k.num(), k.den(), i + 1));
        }
        let report = check_commutative(&g, CheckOptions::default());
        if report.commutative {
            prop_assert!(plunnecke_monotone_check(&values).unwrap());
        }
    }

    #[test]
    fn commutative_graphs_satisfy_plunnecke(g in layered_graph()) {
        prop_assume!(g.h() >= 2);
        let report = check_commutative(&g, CheckOptions::default());
        let values: Vec<_> = (1..=g.h()).map(|i| magnification_flow(&g, i).unwrap().value).collect();
        if report.commutative && values.iter().all(|v| *v > num_rational::BigRational::from_integer(0.into())) {
            prop_assert!(plunnecke_monotone_check(&values).unwrap());
        }
    }

    #[test]
    fn switching_twice_restores(n in 3usize..=12, d in 1usize..=4, seed in any::<u64>()) {
        prop_assume!(d < n);
        let params = GraphParams::validate(1, 1, n, d).unwrap();
        let g = sampler::sample(params, SamplerMethod::default_chain(), Seed(seed)).unwrap();
        let mut rng = Seed(seed).derive(7).rng();
        let edges: Vec<_> = g.edges().collect();
        for _ in 0..20 {
            let (a, c) = edges[rng.random_range(0..edges.len())];
            let (b, dd) = edges[rng.random_range(0..edges.len())];
            if a == b || c == dd || g.has_edge(a, dd) || g.has_edge(b, c) {
                continue;
            }
            let once = g.apply_switching(a, b, c, dd).unwrap();
            prop_assert!(once.is_biregular());
            prop_assert_ne!(&once, &g);
            let twice = once.apply_switching(a, b, dd, c).unwrap();
            prop_assert_eq!(&twice, &g);
        }
    }

    #[test]
    fn samples_are_biregular(n in 2usize..=10, d in 1usize..=3, den in 1u64..=2, seed in any::<u64>()) {
        let Ok(params) = GraphParams::validate(3, den, n, d) else { return Ok(()); };
        let method = if sampler::pairing_feasible(&params) { SamplerMethod::PairingRejection } else { SamplerMethod::default_chain() };
        let g = sampler::sample(params, method, Seed(seed)).unwrap();
        prop_assert!(g.is_biregular());
        let text = write_bipartite(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), GraphFile::Bipartite(g));
    }

    #[test]
    fn layered_round_trip(seed in any::<u64>(), h in 1usize..=3) {
        let g = build_random_layered(Ratio::new(3, 2).unwrap(), 8, 2, h, Seed(seed), SamplerMethod::default_chain()).unwrap();
        let text = write_layered(&g).unwrap();
        prop_assert_eq!(parse_graph(&text).unwrap(), GraphFile::Layered(g));
    }
}

#[test]
fn switch_graph_reaches_whole_family() {
    // BFS over single switchings from the circulant member.
    for (n, d) in [(3, 1), (3, 2), (4, 2)] {
        let params = GraphParams::validate(1, 1, n, d).unwrap();
        let family = sampler::enumerate_family(params).unwrap();
        let start = BipartiteDigraph::circulant(params).unwrap();
        let mut seen = std::collections::BTreeSet::from([start.clone()]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(g) = queue.pop_front() {
            let edges: Vec<_> = g.edges().collect();
            for &(a, c) in &edges {
                for &(b, dd) in &edges {
                    if let Ok(next) = g.apply_switching(a, b, c, dd) {
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        assert_eq!(seen.len(), family.len(), "n = {n}, d = {d}");
    }
}

#[test]
fn subset_policies_agree() {
    // Exact sampler, tiny parameters: fixed-prefix and uniform-random
    // subsets give the same matching probability.
    let params = GraphParams::validate(1, 1, 6, 2).unwrap();
    let trials = 2000;
    let run = |policy| {
        sweep_matching(&[params], trials, Mode::AB, SamplerMethod::PairingRejection, policy, Seed(11)).unwrap().rows[0].successes
    };
    let (a, b) = (run(SubsetPolicy::FixedPrefix), run(SubsetPolicy::UniformRandom));
    // 2x2 chi-square test of homogeneity, 1 degree of freedom
    let n = trials as f64;
    let pooled = (a + b) as f64 / (2.0 * n);
    let expected_hit = n * pooled;
    let expected_miss = n * (1.0 - pooled);
    let chi2: f64 = [a as f64, b as f64]
        .iter()
        .map(|&x| (x - expected_hit).powi(2) / expected_hit + ((n - x) - expected_miss).powi(2) / expected_miss)
        .sum();
    // 0.999 quantile of chi-square with 1 degree of freedom
    assert!(chi2 < 10.828, "prefix {a}, random {b}, chi2 {chi2}");
}
