//! Perfect matchings in the independent-edge bipartite graph `B(n, p)`.

use rand_distr::{Distribution, Geometric};

use super::trials::{SweepResult, SweepRow};
use super::{par_map, ExperimentError};
use crate::analytics::er_matching_prob;
use crate::graph::{Adjacency, Ratio};
use crate::matching::has_perfect_matching;
use crate::rng::Seed;

/// `B(n, p)`: each of the `n²` pairs is an edge independently with
/// probability `p`. Gaps between edges are drawn geometrically.
pub fn sample_er_bipartite(n: usize, p: f64, seed: Seed) -> Result<Adjacency, ExperimentError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ExperimentError::OutOfRange(format!("p = {p} is outside [0, 1]")));
    }
    let mut lists = vec![Vec::new(); n];
    if p > 0.0 && n > 0 {
        let gap = Geometric::new(p).expect("p lies in (0, 1]");
        let mut rng = seed.rng();
        let cells = (n as u64) * (n as u64);
        let mut cell = gap.sample(&mut rng);
        while cell < cells {
            lists[(cell / n as u64) as usize].push((cell % n as u64) as usize);
            cell = cell.saturating_add(1).saturating_add(gap.sample(&mut rng));
        }
    }
    Ok(Adjacency::from_lists(n, lists)?)
}

/// For each `c`, `trials` samples of `B(n, p)` with `p = (ln n + c)/n`.
/// Rows carry the limit `exp(−2e^{−c})` in `analytic`.
pub fn er_baseline_sweep(
    n: usize,
    c_list: &[f64],
    trials: usize,
    master_seed: Seed,
) -> Result<SweepResult, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::OutOfRange("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(ExperimentError::OutOfRange("n must be at least 1".into()));
    }
    let probabilities = c_list
        .iter()
        .map(|&c| {
            let p = ((n as f64).ln() + c) / n as f64;
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(ExperimentError::InvalidP { c, p })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let matched = par_map(c_list.len() * trials, |t| {
        let (i, j) = (t / trials, t % trials);
        let g = sample_er_bipartite(n, probabilities[i], master_seed.derive(i as u64).derive(j as u64))?;
        Ok::<_, ExperimentError>(has_perfect_matching(&g)?)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let one = Ratio::integer(1).expect("1 is positive");
    let rows = c_list
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let successes = matched[i * trials..(i + 1) * trials].iter().filter(|&&m| m).count() as u64;
            let mut row = SweepRow::from_counts("ER".into(), one, n, None, c, trials as u64, successes)?;
            row.analytic = Some(er_matching_prob(c));
            Ok(row)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(SweepResult { rows })
}

/// Matching frequency at an explicit `p`.
#[cfg(test)]
fn matching_frequency(n: usize, p: f64, trials: usize, seed: Seed) -> f64 {
    let hits = (0..trials)
        .filter(|&j| has_perfect_matching(&sample_er_bipartite(n, p, seed.derive(j as u64)).unwrap()).unwrap())
        .count();
    hits as f64 / trials as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_density() {
        let g = sample_er_bipartite(200, 0.1, Seed(3)).unwrap();
        let e = g.edge_count() as f64;
        // mean 4000, sd about 60
        assert!((e - 4000.0).abs() < 400.0, "{e}");
        assert_eq!(sample_er_bipartite(10, 0.0, Seed(1)).unwrap().edge_count(), 0);
        assert_eq!(sample_er_bipartite(10, 1.0, Seed(1)).unwrap().edge_count(), 100);
        assert!(sample_er_bipartite(10, 1.5, Seed(1)).is_err());
    }

    #[test]
    fn degenerate_p() {
        assert_eq!(matching_frequency(8, 0.0, 20, Seed(1)), 0.0);
        assert_eq!(matching_frequency(8, 1.0, 20, Seed(1)), 1.0);
    }

    #[test]
    fn large_c_matches() {
        let r = er_baseline_sweep(300, &[9.0], 100, Seed(2)).unwrap();
        assert!(r.rows[0].p_hat >= 0.99, "{:?}", r.rows[0]);
        assert!((r.rows[0].analytic.unwrap() - er_matching_prob(9.0)).abs() < 1e-15);
    }

    #[test]
    fn invalid_p_rejected() {
        assert!(matches!(
            er_baseline_sweep(10, &[-10.0], 5, Seed(0)),
            Err(ExperimentError::InvalidP { .. })
        ));
        assert!(er_baseline_sweep(10, &[0.0], 0, Seed(0)).is_err());
    }

    #[test]
    fn reproducible() {
        let a = er_baseline_sweep(100, &[0.0, 1.0], 30, Seed(4)).unwrap();
        let b = er_baseline_sweep(100, &[0.0, 1.0], 30, Seed(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        assert!(a.rows.iter().all(|r| r.d.is_none() && r.mode == "ER"));
    }
}
