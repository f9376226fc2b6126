use serde::{Deserialize, Serialize};

use super::rng::{index, RandomSeed};
use super::stats::quantile_sorted;
use super::{par_map, UncertaintyError};
use crate::domain::{CaseStudy, Co2e};
use crate::engine::{self, per_usage_effect};

pub const DEFAULT_RESAMPLES: usize = 2_000;
pub const MIN_RESAMPLES: usize = 100;

/// Percentile-bootstrap interval of a per-usage case-study average.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInterval {
    pub lo: Co2e,
    pub hi: Co2e,
    pub point: Co2e,
    pub confidence: f64,
    pub resamples: usize,
}

fn check_args(cs: &CaseStudy, confidence: f64, resamples: usize) -> Result<(), UncertaintyError> {
    if cs.modified.len() < 2 {
        return Err(UncertaintyError::TooFewInstances(cs.modified.len()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(UncertaintyError::InvalidConfidence(confidence));
    }
    if resamples < MIN_RESAMPLES {
        return Err(UncertaintyError::TooFewResamples {
            got: resamples,
            min: MIN_RESAMPLES,
        });
    }
    Ok(())
}

fn percentile_interval(
    mut stats: Vec<f64>,
    point: Co2e,
    confidence: f64,
) -> BootstrapInterval {
    stats.sort_by(f64::total_cmp);
    let alpha = 1.0 - confidence;
    BootstrapInterval {
        lo: Co2e::kg(quantile_sorted(&stats, alpha / 2.0)),
        hi: Co2e::kg(quantile_sorted(&stats, 1.0 - alpha / 2.0)),
        point,
        confidence,
        resamples: stats.len(),
    }
}

/// Interval for the average per-usage effect of the modified instances,
/// resampling them with replacement. Resample `r` draws from sub-stream `r`
/// of `seed`.
pub fn bootstrap_interval(
    cs: &CaseStudy,
    confidence: f64,
    resamples: usize,
    seed: RandomSeed,
) -> Result<BootstrapInterval, UncertaintyError> {
    bootstrap_with_workers(cs, confidence, resamples, seed, 1)
}

pub(crate) fn bootstrap_with_workers(
    cs: &CaseStudy,
    confidence: f64,
    resamples: usize,
    seed: RandomSeed,
    workers: usize,
) -> Result<BootstrapInterval, UncertaintyError> {
    check_args(cs, confidence, resamples)?;
    let effects: Vec<f64> = cs.modified.iter().map(|i| per_usage_effect(i).as_kg()).collect();
    let n = effects.len();
    let stats = par_map(resamples, workers, |r| {
        let mut rng = seed.substream(r as u64);
        let sum: f64 = (0..n).map(|_| effects[index(&mut rng, n)]).sum();
        sum / n as f64
    });
    let point = engine::case_study_average(cs).map_err(crate::evaluate::EvalError::from)?;
    Ok(percentile_interval(stats, point, confidence))
}

/// Interval for the rebound-corrected average, i.e. the case-study effect
/// with rebound divided by the number of modified instances. Modified and
/// rebound instances are resampled independently.
pub fn bootstrap_interval_with_rebound(
    cs: &CaseStudy,
    confidence: f64,
    resamples: usize,
    seed: RandomSeed,
    workers: usize,
) -> Result<BootstrapInterval, UncertaintyError> {
    check_args(cs, confidence, resamples)?;
    let effects: Vec<f64> = cs.modified.iter().map(|i| per_usage_effect(i).as_kg()).collect();
    let rebound: Vec<f64> = cs
        .rebound
        .iter()
        .map(|r| (r.fp_s + r.fp_a_opt).as_kg())
        .collect();
    let (n, nr) = (effects.len(), rebound.len());
    let stats = par_map(resamples, workers, |r| {
        let mut rng = seed.substream(r as u64);
        let modified: f64 = (0..n).map(|_| effects[index(&mut rng, n)]).sum();
        let extra: f64 = (0..nr).map(|_| rebound[index(&mut rng, nr)]).sum();
        (modified - extra) / n as f64
    });
    let point = engine::case_study_effect_with_rebound(cs)
        .map_err(crate::evaluate::EvalError::from)?
        / n as f64;
    Ok(percentile_interval(stats, point, confidence))
}
