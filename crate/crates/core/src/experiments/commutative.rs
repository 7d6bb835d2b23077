//! Commutativity of stacked random biregular layers.

use serde::{Deserialize, Serialize};

use super::stats::{wilson_interval, Z95};
use super::{par_map, ExperimentError};
use crate::analytics::commutative_d_bounds;
use crate::graph::{LayeredGraph, Ratio};
use crate::output::{sig6, Tabular};
use crate::plunnecke::{build_random_layered, check_commutative, CheckOptions, CommutativityReport};
use crate::rng::Seed;
use crate::sampler::SamplerMethod;

/// Builds one layered instance and certifies it.
pub fn commutative_instance(
    k: Ratio,
    m: usize,
    d: usize,
    h: usize,
    seed: Seed,
    sampler: SamplerMethod,
    options: CheckOptions,
) -> Result<(LayeredGraph, CommutativityReport), ExperimentError> {
    let g = build_random_layered(k, m, d, h, seed, sampler)?;
    let report = check_commutative(&g, options);
    Ok((g, report))
}

pub fn commutative_trial(
    k: Ratio,
    m: usize,
    d: usize,
    h: usize,
    seed: Seed,
    sampler: SamplerMethod,
) -> Result<CommutativityReport, ExperimentError> {
    commutative_instance(k, m, d, h, seed, sampler, CheckOptions::default()).map(|(_, r)| r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutativeRow {
    pub k_num: u64,
    pub k_den: u64,
    pub m: usize,
    pub h: usize,
    pub d: usize,
    pub trials: u64,
    pub commutative: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub d_low: f64,
    pub d_high: f64,
    pub mean_upward_violations: f64,
    pub mean_downward_violations: f64,
    pub sampled_edges: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CommutativeSweep {
    pub rows: Vec<CommutativeRow>,
}

impl Tabular for CommutativeSweep {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "k_num",
            "k_den",
            "m",
            "h",
            "d",
            "trials",
            "commutative",
            "p_hat",
            "ci_low",
            "ci_high",
            "d_low",
            "d_high",
            "mean_upward_violations",
            "mean_downward_violations",
            "sampled_edges",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.k_num.to_string(),
                    r.k_den.to_string(),
                    r.m.to_string(),
                    r.h.to_string(),
                    r.d.to_string(),
                    r.trials.to_string(),
                    r.commutative.to_string(),
                    sig6(r.p_hat),
                    sig6(r.ci_low),
                    sig6(r.ci_high),
                    sig6(r.d_low),
                    sig6(r.d_high),
                    sig6(r.mean_upward_violations),
                    sig6(r.mean_downward_violations),
                    r.sampled_edges.map(|e| e.to_string()).unwrap_or_default(),
                ]
            })
            .collect()
    }
}

/// `trials` instances per `d`; trial `j` of the `i`-th `d` (in increasing
/// order) uses `master_seed.derive(i).derive(j)`.
#[allow(clippy::too_many_arguments)]
pub fn commutative_sweep(
    k: Ratio,
    m: usize,
    d_list: &[usize],
    h: usize,
    trials: usize,
    master_seed: Seed,
    sampler: SamplerMethod,
    sample_edges: Option<usize>,
) -> Result<CommutativeSweep, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::OutOfRange("trials must be at least 1".into()));
    }
    let mut ds = d_list.to_vec();
    ds.sort_unstable();
    let bounds = commutative_d_bounds(k, m, h);
    let reports = par_map(ds.len() * trials, |t| {
        let (i, j) = (t / trials, t % trials);
        let seed = master_seed.derive(i as u64).derive(j as u64);
        let options = CheckOptions {
            sample_edges: sample_edges.map(|e| (e, seed.derive(u64::MAX))),
        };
        commutative_instance(k, m, ds[i], h, seed, sampler, options).map(|(_, r)| r)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let rows = ds
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let chunk = &reports[i * trials..(i + 1) * trials];
            let commutative = chunk.iter().filter(|r| r.commutative).count() as u64;
            let (ci_low, ci_high) = wilson_interval(commutative, trials as u64, Z95)?;
            let mean = |f: fn(&CommutativityReport) -> usize| {
                chunk.iter().map(|r| f(r) as f64).sum::<f64>() / trials as f64
            };
            Ok(CommutativeRow {
                k_num: k.num(),
                k_den: k.den(),
                m,
                h,
                d,
                trials: trials as u64,
                commutative,
                p_hat: commutative as f64 / trials as f64,
                ci_low,
                ci_high,
                d_low: bounds.d_low,
                d_high: bounds.d_high,
                mean_upward_violations: mean(|r| r.upward_violations.len()),
                mean_downward_violations: mean(|r| r.downward_violations.len()),
                sampled_edges: sample_edges,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(CommutativeSweep { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_layer_always_commutative() {
        let k = Ratio::integer(2).unwrap();
        for seed in 0..5 {
            let r = commutative_trial(k, 6, 3, 1, Seed(seed), SamplerMethod::default_chain()).unwrap();
            assert!(r.commutative);
            assert_eq!(r.edges_checked, 0);
        }
    }

    #[test]
    fn complete_layers_commute() {
        // d = m with k = 1 makes every layer complete.
        let k = Ratio::integer(1).unwrap();
        let r = commutative_trial(k, 5, 5, 3, Seed(1), SamplerMethod::default_chain()).unwrap();
        assert!(r.commutative);
    }

    #[test]
    fn sweep_shape() {
        let k = Ratio::integer(1).unwrap();
        let s = commutative_sweep(k, 12, &[6, 2], 2, 4, Seed(3), SamplerMethod::default_chain(), None).unwrap();
        assert_eq!(s.rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![2, 6]);
        for row in &s.rows {
            assert!(row.commutative <= row.trials);
            assert!(row.ci_low <= row.p_hat && row.p_hat <= row.ci_high);
        }
        let again = commutative_sweep(k, 12, &[6, 2], 2, 4, Seed(3), SamplerMethod::default_chain(), None).unwrap();
        assert_eq!(s, again);
    }
}
