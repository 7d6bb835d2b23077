//! Seeded Monte Carlo experiments.
//!
//! Trial `j` of parameter point `i` uses `master.derive(i).derive(j)`, and
//! trials are mapped in order, so every result is a function of the
//! configuration and the master seed alone. `BIREG_THREADS` caps the number
//! of worker threads.

mod commutative;
mod er;
mod local;
mod stats;
mod trials;

pub use commutative::{
    commutative_instance, commutative_sweep, commutative_trial, CommutativeRow, CommutativeSweep,
};
pub use er::{er_baseline_sweep, sample_er_bipartite};
pub use local::{
    estimate_local_statistics, exhaustive_local_statistics, LocalStatistic, LocalStatsTable,
};
pub use stats::{wilson_interval, z_for, MeanAccumulator, Z95};
pub use trials::{
    run_matching_trial, sweep_matching, sweep_matching_with_trials, trial_instance, Mode,
    ObservableStats, SubsetPolicy, SweepResult, SweepRow, TrialConfig, TrialInstance,
    TrialOutcome, TrialRecord,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::analytics::AnalyticsError;
use crate::graph::GraphError;
use crate::matching::MatchingError;
use crate::plunnecke::PlunneckeError;
use crate::sampler::SampleError;

pub const THREADS_ENV: &str = "BIREG_THREADS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("p = {p} (from c = {c}) is outside [0, 1]")]
    InvalidP { c: f64, p: f64 },
    #[error("mode {0} is not a matching mode")]
    WrongMode(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Plunnecke(#[from] PlunneckeError),
}

/// Worker cap from `BIREG_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// `f(0), …, f(count − 1)` in order, computed in parallel.
pub(crate) fn par_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let run = || (0..count).into_par_iter().map(&f).collect();
    match thread_cap() {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}
