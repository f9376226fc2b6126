//! Uncertainty quantification around the effect engine: bootstrap intervals
//! for case studies, Monte Carlo propagation over scenario parameters,
//! one-at-a-time sensitivity and calibration of the extrapolation coefficient.
//!
//! All randomness flows from a [`RandomSeed`]. Identical seeds give
//! bit-identical results regardless of how many worker threads are used.

mod bootstrap;
mod calibrate;
mod distribution;
mod montecarlo;
mod rng;
pub mod stats;
mod tornado;

use thiserror::Error;

use crate::domain::ParamPath;
use crate::evaluate::EvalError;

pub use bootstrap::{
    bootstrap_interval, bootstrap_interval_with_rebound, BootstrapInterval, DEFAULT_RESAMPLES,
    MIN_RESAMPLES,
};
pub use calibrate::calibrate_k;
pub use distribution::{ParameterDistribution, Shape};
pub use montecarlo::{
    monte_carlo_assess, MonteCarloOptions, MonteCarloSummary, DEFAULT_SAMPLES, MIN_SAMPLES,
};
pub use rng::RandomSeed;
pub use stats::{DistributionSummary, Histogram};
pub use tornado::{sensitivity_tornado, TornadoRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UncertaintyError {
    #[error("bootstrap needs at least 2 modified instances, got {0}")]
    TooFewInstances(usize),
    #[error("at least {min} resamples required, got {got}")]
    TooFewResamples { got: usize, min: usize },
    #[error("at least {min} Monte Carlo samples required, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),
    #[error("invalid distribution for `{target}`: {reason}")]
    InvalidDistribution { target: ParamPath, reason: String },
    #[error("parameter `{0}` is distributed more than once")]
    DuplicateTarget(ParamPath),
    #[error("parameter `{0}` is varied but does not enter this scenario's estimation path")]
    NotApplicable(ParamPath),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Worker threads used when the caller does not choose.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Maps `f` over `0..n` on up to `workers` threads. Output order is the index
/// order, independent of the worker count.
pub(crate) fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let start = w * chunk;
                    let end = (start + chunk).min(n);
                    (start..end).map(f).collect::<Vec<T>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
