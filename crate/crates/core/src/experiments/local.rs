//! Local statistics of a single random graph against their closed forms.
//!
//! Every statistic looks at fixed labels (`y = 0`, `y' = 1`, prefixes of
//! `Y` and `Z`); the model is invariant under relabelling, so these stand
//! for arbitrary choices.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::stats::{wilson_interval, z_for, MeanAccumulator};
use super::{par_map, ExperimentError};
use crate::analytics::{
    a_plus_bounds, lemma21_expectations, no_edge_exact, q_expectation, ratio_to_f64,
};
use crate::graph::{BipartiteDigraph, Direction, GraphParams};
use crate::output::{sig6, Tabular};
use crate::rng::Seed;
use crate::sampler::{self, SamplerMethod};

/// Confidence level of the pass/fail intervals.
pub const LOCAL_CONFIDENCE: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalStatistic {
    pub name: String,
    pub samples: u64,
    pub empirical: f64,
    /// Exact average when the whole family was enumerated.
    #[serde(with = "crate::output::opt_ratio_string")]
    pub empirical_exact: Option<BigRational>,
    pub oracle: Option<f64>,
    #[serde(with = "crate::output::opt_ratio_string")]
    pub oracle_exact: Option<BigRational>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalStatsTable {
    pub params: GraphParams,
    /// Size of the set `S` in the single-vertex no-edge statistics.
    pub s: usize,
    pub rows: Vec<LocalStatistic>,
}

impl LocalStatsTable {
    pub fn get(&self, name: &str) -> Option<&LocalStatistic> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl Tabular for LocalStatsTable {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "statistic",
            "samples",
            "empirical",
            "empirical_exact",
            "oracle",
            "oracle_exact",
            "lower_bound",
            "upper_bound",
            "ci_low",
            "ci_high",
            "pass",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |x: Option<f64>| x.map(sig6).unwrap_or_default();
        let opt_exact = |x: &Option<BigRational>| x.as_ref().map(|r| r.to_string()).unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    r.samples.to_string(),
                    sig6(r.empirical),
                    opt_exact(&r.empirical_exact),
                    opt(r.oracle),
                    opt_exact(&r.oracle_exact),
                    opt(r.lower_bound),
                    opt(r.upper_bound),
                    sig6(r.ci_low),
                    sig6(r.ci_high),
                    r.pass.to_string(),
                ]
            })
            .collect()
    }
}

/// What one graph contributes.
#[derive(Debug, Clone, Copy)]
struct Observation {
    /// `|Γ(0) ∩ Γ(1)|`.
    common: usize,
    /// `Γ⁻(z) ∩ {1, …, s} = ∅` for `z = min Γ(0)`.
    conditioned_miss: bool,
    /// `Γ⁻(0) ∩ {0, …, s−1} = ∅`.
    unconditioned_miss: bool,
    /// `Γ(0) ∩ Γ(1) = ∅`.
    disjoint: bool,
    /// Isolated vertices of `G[{0..kd}, {0..kd}]`, when `kd ≤ n`.
    q: Option<usize>,
}

fn observe(g: &BipartiteDigraph, s: usize) -> Observation {
    let params = g.params();
    let (g0, g1) = (g.out_neighbors(0), g.out_neighbors(1));
    let common = g0.iter().filter(|z| g1.binary_search(z).is_ok()).count();
    let z = g0[0] as usize;
    let conditioned_miss = g.in_neighbors(z).iter().all(|&w| w == 0 || w as usize > s);
    let unconditioned_miss = g.in_neighbors(0).iter().all(|&w| w as usize >= s);
    let kd = params.kd();
    let q = (kd <= params.n()).then(|| {
        let isolated_a = (0..kd)
            .filter(|&a| g.out_neighbors(a).iter().all(|&b| b as usize >= kd))
            .count();
        let isolated_b = (0..kd)
            .filter(|&b| g.in_neighbors(b).iter().all(|&a| a as usize >= kd))
            .count();
        isolated_a + isolated_b
    });
    Observation {
        common,
        conditioned_miss,
        unconditioned_miss,
        disjoint: common == 0,
        q,
    }
}

fn check_inputs(params: &GraphParams, s: usize) -> Result<(), ExperimentError> {
    if params.n() < 2 {
        return Err(ExperimentError::OutOfRange("n >= 2 is needed for y and y'".into()));
    }
    if s == 0 || s > params.n() - 1 {
        return Err(ExperimentError::OutOfRange(format!(
            "s = {s} must lie in 1..={}",
            params.n() - 1
        )));
    }
    Ok(())
}

struct Oracles {
    common: BigRational,
    conditioned: BigRational,
    unconditioned: BigRational,
    disjoint_lower: Option<f64>,
    disjoint_upper: f64,
    disjoint_lower_exact: Option<BigRational>,
    disjoint_upper_exact: Option<BigRational>,
    q: Option<(f64, Option<BigRational>)>,
}

fn oracles(params: &GraphParams, s: usize) -> Result<Oracles, ExperimentError> {
    let bounds = a_plus_bounds(params)?;
    Ok(Oracles {
        common: lemma21_expectations(params, None)?.common_neighbors,
        conditioned: no_edge_exact(s, params, Direction::In, true)?,
        unconditioned: no_edge_exact(s, params, Direction::In, false)?,
        disjoint_lower: bounds.lower.as_ref().map(|p| p.value),
        disjoint_upper: bounds.upper.value,
        disjoint_lower_exact: bounds.lower.and_then(|p| p.exact),
        disjoint_upper_exact: bounds.upper.exact,
        q: (params.kd() <= params.n()).then(|| {
            let e = q_expectation(params);
            (e.value, e.exact)
        }),
    })
}

/// Monte Carlo estimates over `trials` independent samples; graph `j` is
/// drawn with seed `master_seed.derive(j)`.
pub fn estimate_local_statistics(
    params: GraphParams,
    s: usize,
    trials: usize,
    master_seed: Seed,
    sampler: SamplerMethod,
) -> Result<LocalStatsTable, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::OutOfRange("trials must be at least 1".into()));
    }
    check_inputs(&params, s)?;
    let oracle = oracles(&params, s)?;
    let observations = par_map(trials, |j| {
        sampler::sample(params, sampler, master_seed.derive(j as u64)).map(|g| observe(&g, s))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let z = z_for(LOCAL_CONFIDENCE);
    let n = trials as u64;

    let mean_row = |name: &str, values: Vec<f64>, target: f64, exact: Option<&BigRational>| {
        let acc: MeanAccumulator = values.into_iter().collect();
        let (lo, hi) = acc.interval(z).expect("trials >= 1");
        LocalStatistic {
            name: name.into(),
            samples: n,
            empirical: acc.mean().expect("trials >= 1"),
            empirical_exact: None,
            oracle: Some(target),
            oracle_exact: exact.cloned(),
            lower_bound: None,
            upper_bound: None,
            ci_low: lo,
            ci_high: hi,
            pass: lo - 1e-12 <= target && target <= hi + 1e-12,
        }
    };
    let frequency = |hits: u64| -> Result<(f64, f64, f64), ExperimentError> {
        let (lo, hi) = wilson_interval(hits, n, z)?;
        Ok((hits as f64 / n as f64, lo, hi))
    };
    let proportion_row = |name: &str, hits: u64, exact: &BigRational| -> Result<LocalStatistic, ExperimentError> {
        let (p, lo, hi) = frequency(hits)?;
        let target = ratio_to_f64(exact);
        Ok(LocalStatistic {
            name: name.into(),
            samples: n,
            empirical: p,
            empirical_exact: None,
            oracle: Some(target),
            oracle_exact: Some(exact.clone()),
            lower_bound: None,
            upper_bound: None,
            ci_low: lo,
            ci_high: hi,
            pass: lo <= target && target <= hi,
        })
    };

    let count = |f: fn(&Observation) -> bool| observations.iter().filter(|o| f(o)).count() as u64;
    let mut rows = vec![
        mean_row(
            "common_neighbors",
            observations.iter().map(|o| o.common as f64).collect(),
            ratio_to_f64(&oracle.common),
            Some(&oracle.common),
        ),
        proportion_row("no_edge_conditioned", count(|o| o.conditioned_miss), &oracle.conditioned)?,
        proportion_row("no_edge_unconditioned", count(|o| o.unconditioned_miss), &oracle.unconditioned)?,
    ];
    let (p, lo, hi) = frequency(count(|o| o.disjoint))?;
    let lower = oracle.disjoint_lower.unwrap_or(0.0);
    rows.push(LocalStatistic {
        name: "disjoint_neighborhoods".into(),
        samples: n,
        empirical: p,
        empirical_exact: None,
        oracle: None,
        oracle_exact: None,
        lower_bound: oracle.disjoint_lower,
        upper_bound: Some(oracle.disjoint_upper),
        ci_low: lo,
        ci_high: hi,
        pass: hi >= lower && lo <= oracle.disjoint_upper,
    });
    if let Some((value, exact)) = &oracle.q {
        rows.push(mean_row(
            "isolated_q",
            observations.iter().filter_map(|o| o.q).map(|q| q as f64).collect(),
            *value,
            exact.as_ref(),
        ));
    }
    Ok(LocalStatsTable { params, s, rows })
}

/// Exact averages over the whole family `G(k, n, d)`, which must be small
/// enough to enumerate.
pub fn exhaustive_local_statistics(params: GraphParams, s: usize) -> Result<LocalStatsTable, ExperimentError> {
    check_inputs(&params, s)?;
    let oracle = oracles(&params, s)?;
    let family = sampler::enumerate_family(params)?;
    let observations: Vec<Observation> = family.iter().map(|g| observe(g, s)).collect();
    let size = observations.len() as u64;
    let average = |total: usize| BigRational::new(BigInt::from(total), BigInt::from(size));

    let exact_row = |name: &str, value: BigRational, target: Option<&BigRational>| {
        let v = ratio_to_f64(&value);
        LocalStatistic {
            name: name.into(),
            samples: size,
            empirical: v,
            oracle: target.map(ratio_to_f64),
            oracle_exact: target.cloned(),
            lower_bound: None,
            upper_bound: None,
            ci_low: v,
            ci_high: v,
            pass: target.is_none_or(|t| *t == value),
            empirical_exact: Some(value),
        }
    };
    let total = |f: fn(&Observation) -> usize| observations.iter().map(f).sum::<usize>();
    let mut rows = vec![
        exact_row("common_neighbors", average(total(|o| o.common)), Some(&oracle.common)),
        exact_row(
            "no_edge_conditioned",
            average(total(|o| o.conditioned_miss as usize)),
            Some(&oracle.conditioned),
        ),
        exact_row(
            "no_edge_unconditioned",
            average(total(|o| o.unconditioned_miss as usize)),
            Some(&oracle.unconditioned),
        ),
    ];
    let disjoint = average(total(|o| o.disjoint as usize));
    let mut row = exact_row("disjoint_neighborhoods", disjoint.clone(), None);
    row.lower_bound = oracle.disjoint_lower;
    row.upper_bound = Some(oracle.disjoint_upper);
    let above = match &oracle.disjoint_lower_exact {
        Some(l) => *l <= disjoint,
        None => oracle.disjoint_lower.is_none_or(|l| l <= row.empirical),
    };
    let below = match &oracle.disjoint_upper_exact {
        Some(u) => disjoint <= *u,
        None => row.empirical <= oracle.disjoint_upper,
    };
    row.pass = above && below;
    rows.push(row);
    if let Some((_, exact)) = &oracle.q {
        let value = average(observations.iter().filter_map(|o| o.q).sum());
        let mut row = exact_row("isolated_q", value, exact.as_ref());
        if exact.is_none() {
            row.oracle = oracle.q.as_ref().map(|(v, _)| *v);
            row.pass = (row.empirical - row.oracle.unwrap_or(f64::NAN)).abs() < 1e-9;
        }
        rows.push(row);
    }
    Ok(LocalStatsTable { params, s, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, d: usize) -> GraphParams {
        GraphParams::validate(1, 1, n, d).unwrap()
    }

    fn r(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn exhaustive_common_neighbors_is_one_half() {
        let t = exhaustive_local_statistics(params(5, 2), 2).unwrap();
        let row = t.get("common_neighbors").unwrap();
        assert_eq!(row.empirical_exact, Some(r(1, 2)));
        assert!(t.rows.iter().all(|r| r.pass), "{t:?}");
    }

    #[test]
    fn exhaustive_no_edge_values() {
        let t = exhaustive_local_statistics(params(5, 3), 2).unwrap();
        assert_eq!(t.get("no_edge_conditioned").unwrap().empirical_exact, Some(r(1, 6)));
        let t = exhaustive_local_statistics(params(4, 2), 1).unwrap();
        assert_eq!(t.get("no_edge_unconditioned").unwrap().empirical_exact, Some(r(1, 2)));
        assert!(t.get("disjoint_neighborhoods").unwrap().pass);
    }

    #[test]
    fn monte_carlo_small() {
        let t = estimate_local_statistics(params(5, 3), 2, 4000, Seed(5), SamplerMethod::PairingRejection).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows.iter().all(|r| r.ci_low <= r.empirical && r.empirical <= r.ci_high));
        let again = estimate_local_statistics(params(5, 3), 2, 4000, Seed(5), SamplerMethod::PairingRejection).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(estimate_local_statistics(params(5, 2), 2, 0, Seed(1), SamplerMethod::PairingRejection).is_err());
        assert!(estimate_local_statistics(params(5, 2), 5, 10, Seed(1), SamplerMethod::PairingRejection).is_err());
        assert!(estimate_local_statistics(params(5, 2), 0, 10, Seed(1), SamplerMethod::PairingRejection).is_err());
    }
}
