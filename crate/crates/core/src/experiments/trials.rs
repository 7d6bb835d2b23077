//! Perfect matchings in induced subgraphs `G[A, B]` of random graphs.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::stats::{wilson_interval, MeanAccumulator, Z95};
use super::{par_map, ExperimentError};
use crate::analytics::threshold_c;
use crate::graph::{BipartiteDigraph, GraphParams, InducedSubgraph, Ratio};
use crate::matching::{find_problematic_pair, has_perfect_matching, ProblematicPair};
use crate::output::{sig6, Tabular};
use crate::rng::Seed;
use crate::sampler::{self, SamplerMethod};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mode {
    /// `|A| = |B| = kd`, `A ⊆ Y`, `B ⊆ Z`.
    AB,
    /// `|A| = kd` with `y ∈ A`, and `B = Γ(y)`.
    AGamma,
    /// Independent-edge bipartite graph `B(n, p)`.
    Er { p: f64 },
    Commutative { k: Ratio, m: usize, d: usize, h: usize },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::AB => write!(f, "AB"),
            Mode::AGamma => write!(f, "AGamma"),
            Mode::Er { p } => write!(f, "ER({p})"),
            Mode::Commutative { k, m, d, h } => write!(f, "Commutative({k},{m},{d},{h})"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    /// Parses the matching modes `AB` and `AGamma` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(Mode::AB),
            "agamma" => Ok(Mode::AGamma),
            other => Err(format!("unknown mode `{other}` (expected AB or AGamma)")),
        }
    }
}

/// How `A`, `B` and `y` are chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetPolicy {
    /// First `kd` vertices of each side, `y = 0`.
    #[default]
    FixedPrefix,
    UniformRandom,
}

impl FromStr for SubsetPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" | "fixed-prefix" => Ok(SubsetPolicy::FixedPrefix),
            "random" | "uniform-random" => Ok(SubsetPolicy::UniformRandom),
            other => Err(format!("unknown subset policy `{other}` (expected prefix or random)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub params: GraphParams,
    pub mode: Mode,
    pub sampler: SamplerMethod,
    pub seed: Seed,
    pub subset_policy: SubsetPolicy,
}

impl TrialConfig {
    pub fn new(
        params: GraphParams,
        mode: Mode,
        sampler: SamplerMethod,
        seed: Seed,
        subset_policy: SubsetPolicy,
    ) -> Result<Self, ExperimentError> {
        match mode {
            Mode::AGamma if params.d() < 2 => {
                return Err(ExperimentError::OutOfRange(format!(
                    "mode AGamma needs d >= 2, got d = {}",
                    params.d()
                )))
            }
            Mode::Er { p } if !(0.0..=1.0).contains(&p) => {
                return Err(ExperimentError::OutOfRange(format!("p = {p} is outside [0, 1]")))
            }
            _ => {}
        }
        if params.kd() > params.n() {
            return Err(ExperimentError::OutOfRange(format!(
                "|A| = kd = {} exceeds n = {}",
                params.kd(),
                params.n()
            )));
        }
        Ok(TrialConfig {
            params,
            mode,
            sampler,
            seed,
            subset_policy,
        })
    }
}

/// Counts observed in one trial; only the fields of the trial's mode are
/// set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableStats {
    /// `#{z ∈ Γ(y) : Γ⁻(z) ∩ A = {y}}`.
    pub a_minus: Option<usize>,
    /// `#{y' ∈ A ∖ {y} : Γ(y') ∩ Γ(y) = ∅}`.
    pub a_plus: Option<usize>,
    /// Isolated vertices of `A` in `G[A, B]`.
    pub q_plus: Option<usize>,
    /// Isolated vertices of `B` in `G[A, B]`.
    pub q_minus: Option<usize>,
}

impl ObservableStats {
    pub fn q(&self) -> Option<usize> {
        Some(self.q_plus? + self.q_minus?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub matched: bool,
    pub stats: ObservableStats,
    /// A problematic pair of `G[A, B]` in local indices (positions within
    /// `A` and `B`), present exactly when `matched` is false.
    pub witness: Option<ProblematicPair>,
}

/// The sampled graph and the subgraph a trial examines.
#[derive(Debug, Clone)]
pub struct TrialInstance {
    pub graph: BipartiteDigraph,
    pub subgraph: InducedSubgraph,
    /// The distinguished vertex in mode `AGamma`.
    pub y: Option<usize>,
}

/// Samples `G` and chooses `A`, `B` (and `y`) for one trial.
pub fn trial_instance(config: &TrialConfig) -> Result<TrialInstance, ExperimentError> {
    let params = config.params;
    let graph = sampler::sample(params, config.sampler, config.seed.derive(0))?;
    let kd = params.kd();
    let mut rng = config.seed.derive(1).rng();
    let (a, y) = match config.subset_policy {
        SubsetPolicy::FixedPrefix => ((0..kd).collect::<Vec<_>>(), 0),
        SubsetPolicy::UniformRandom => {
            let mut a = index::sample(&mut rng, params.n(), kd).into_vec();
            a.sort_unstable();
            let y = a[rng.random_range(0..kd)];
            (a, y)
        }
    };
    let (b, y) = match config.mode {
        Mode::AB => {
            let b = match config.subset_policy {
                SubsetPolicy::FixedPrefix => (0..kd).collect(),
                SubsetPolicy::UniformRandom => {
                    let mut b = index::sample(&mut rng, params.kn(), kd).into_vec();
                    b.sort_unstable();
                    b
                }
            };
            (b, None)
        }
        Mode::AGamma => {
            let b = graph.out_neighbors(y).iter().map(|&z| z as usize).collect();
            (b, Some(y))
        }
        other => return Err(ExperimentError::WrongMode(other.to_string())),
    };
    let subgraph = graph.induce(&a, &b)?;
    Ok(TrialInstance { graph, subgraph, y })
}

pub fn run_matching_trial(config: &TrialConfig) -> Result<TrialOutcome, ExperimentError> {
    let instance = trial_instance(config)?;
    let h = instance.subgraph.adjacency();
    let matched = has_perfect_matching(h)?;
    let witness = if matched { None } else { find_problematic_pair(h)? };
    Ok(TrialOutcome {
        matched,
        stats: observe(&instance),
        witness,
    })
}

fn observe(instance: &TrialInstance) -> ObservableStats {
    let g = &instance.graph;
    let h = instance.subgraph.adjacency();
    match instance.y {
        Some(y) => {
            let params = g.params();
            let mut in_a = vec![false; params.n()];
            for &a in instance.subgraph.a_vertices() {
                in_a[a] = true;
            }
            let gamma_y = g.out_neighbors(y);
            let a_minus = gamma_y
                .iter()
                .filter(|&&z| g.in_neighbors(z as usize).iter().all(|&w| w as usize == y || !in_a[w as usize]))
                .count();
            let mut in_gamma = vec![false; params.kn()];
            for &z in gamma_y {
                in_gamma[z as usize] = true;
            }
            let a_plus = instance
                .subgraph
                .a_vertices()
                .iter()
                .filter(|&&a| a != y && g.out_neighbors(a).iter().all(|&z| !in_gamma[z as usize]))
                .count();
            ObservableStats {
                a_minus: Some(a_minus),
                a_plus: Some(a_plus),
                ..Default::default()
            }
        }
        None => {
            let q_plus = (0..h.left_len()).filter(|&a| h.degree(a) == 0).count();
            let q_minus = h.right_degrees().iter().filter(|&&deg| deg == 0).count();
            ObservableStats {
                q_plus: Some(q_plus),
                q_minus: Some(q_minus),
                ..Default::default()
            }
        }
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub mode: String,
    pub k_num: u64,
    pub k_den: u64,
    pub n: usize,
    pub d: Option<usize>,
    pub c: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_a_minus: Option<f64>,
    pub mean_a_plus: Option<f64>,
    pub mean_q: Option<f64>,
    /// Limiting matching probability where one is known.
    pub analytic: Option<f64>,
}

impl SweepRow {
    pub(crate) fn from_counts(
        mode: String,
        k: Ratio,
        n: usize,
        d: Option<usize>,
        c: f64,
        trials: u64,
        successes: u64,
    ) -> Result<Self, ExperimentError> {
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z95)?;
        Ok(SweepRow {
            mode,
            k_num: k.num(),
            k_den: k.den(),
            n,
            d,
            c,
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            mean_a_minus: None,
            mean_a_plus: None,
            mean_q: None,
            analytic: None,
        })
    }
}

/// Sweep rows with 95% Wilson intervals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl Tabular for SweepResult {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "mode",
            "k_num",
            "k_den",
            "n",
            "d",
            "c",
            "trials",
            "successes",
            "p_hat",
            "ci_low",
            "ci_high",
            "mean_a_minus",
            "mean_a_plus",
            "mean_q",
            "analytic",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |x: Option<f64>| x.map(sig6).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.mode.clone(),
                    r.k_num.to_string(),
                    r.k_den.to_string(),
                    r.n.to_string(),
                    r.d.map(|d| d.to_string()).unwrap_or_default(),
                    sig6(r.c),
                    r.trials.to_string(),
                    r.successes.to_string(),
                    sig6(r.p_hat),
                    sig6(r.ci_low),
                    sig6(r.ci_high),
                    opt(r.mean_a_minus),
                    opt(r.mean_a_plus),
                    opt(r.mean_q),
                    opt(r.analytic),
                ]
            })
            .collect()
    }
}

/// A single trial as emitted by `--emit-trials`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub d: usize,
    pub trial: usize,
    pub seed: Seed,
    #[serde(flatten)]
    pub outcome: TrialOutcome,
}

pub fn sweep_matching(
    params_list: &[GraphParams],
    trials: usize,
    mode: Mode,
    sampler: SamplerMethod,
    subset_policy: SubsetPolicy,
    master_seed: Seed,
) -> Result<SweepResult, ExperimentError> {
    sweep_matching_with_trials(params_list, trials, mode, sampler, subset_policy, master_seed).map(|(r, _)| r)
}

/// Like [`sweep_matching`], also returning every trial. Rows are ordered by
/// `d`; the seed of a point is derived from its position in that order.
pub fn sweep_matching_with_trials(
    params_list: &[GraphParams],
    trials: usize,
    mode: Mode,
    sampler: SamplerMethod,
    subset_policy: SubsetPolicy,
    master_seed: Seed,
) -> Result<(SweepResult, Vec<TrialRecord>), ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::OutOfRange("trials must be at least 1".into()));
    }
    if !matches!(mode, Mode::AB | Mode::AGamma) {
        return Err(ExperimentError::WrongMode(mode.to_string()));
    }
    let mut points = params_list.to_vec();
    points.sort_by_key(|p| (p.d(), p.n(), p.k()));
    let configs = points
        .iter()
        .enumerate()
        .flat_map(|(i, &params)| {
            (0..trials).map(move |j| {
                TrialConfig::new(params, mode, sampler, master_seed.derive(i as u64).derive(j as u64), subset_policy)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let outcomes = par_map(configs.len(), |t| run_matching_trial(&configs[t]))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(points.len());
    for (i, params) in points.iter().enumerate() {
        let chunk = &outcomes[i * trials..(i + 1) * trials];
        let successes = chunk.iter().filter(|o| o.matched).count() as u64;
        let mut row = SweepRow::from_counts(
            mode.to_string(),
            params.k(),
            params.n(),
            Some(params.d()),
            threshold_c(params).c,
            trials as u64,
            successes,
        )?;
        let mean = |f: fn(&ObservableStats) -> Option<usize>| -> Option<f64> {
            let acc: MeanAccumulator = chunk.iter().filter_map(|o| f(&o.stats)).map(|x| x as f64).collect();
            acc.mean()
        };
        row.mean_a_minus = mean(|s| s.a_minus);
        row.mean_a_plus = mean(|s| s.a_plus);
        row.mean_q = mean(ObservableStats::q);
        rows.push(row);
    }
    let records = configs
        .iter()
        .zip(outcomes)
        .enumerate()
        .map(|(t, (config, outcome))| TrialRecord {
            n: config.params.n(),
            d: config.params.d(),
            trial: t % trials,
            seed: config.seed,
            outcome,
        })
        .collect();
    Ok((SweepResult { rows }, records))
}
