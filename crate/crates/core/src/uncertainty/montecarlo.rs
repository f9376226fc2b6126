use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::distribution::ParameterDistribution;
use super::rng::{index, unit, RandomSeed};
use super::stats::{DistributionSummary, DEFAULT_BINS};
use super::{par_map, UncertaintyError};
use crate::domain::{AssessmentScenario, ParamPath, UncertaintyClass};
use crate::evaluate::{evaluate, is_applicable, Outcome, ScenarioParams};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const MIN_SAMPLES: usize = 1_000;

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloOptions {
    pub samples: usize,
    pub seed: RandomSeed,
    pub workers: usize,
    pub bins: usize,
}

impl MonteCarloOptions {
    pub fn new(samples: usize, seed: RandomSeed) -> Self {
        MonteCarloOptions {
            samples,
            seed,
            workers: 1,
            bins: DEFAULT_BINS,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub seed: RandomSeed,
    /// Headline effect, kg CO2e.
    pub effect: DistributionSummary,
    /// Overstatement of a naive assessment, when the scenario defines one.
    pub overstatement: Option<DistributionSummary>,
    /// Summed effect over the with-service window, when one is supplied.
    pub window_effect: Option<DistributionSummary>,
    /// Varied parameters whose uncertainty is about existing data.
    pub data_uncertainty: Vec<ParamPath>,
    /// Varied parameters whose uncertainty is about the future.
    pub future_uncertainty: Vec<ParamPath>,
}

pub(crate) fn check_distributions(
    scenario: &AssessmentScenario,
    distributions: &[ParameterDistribution],
) -> Result<(), UncertaintyError> {
    let mut seen = BTreeSet::new();
    for d in distributions {
        d.check()?;
        if !seen.insert(d.target) {
            return Err(UncertaintyError::DuplicateTarget(d.target));
        }
        if !is_applicable(scenario, d.target) {
            return Err(UncertaintyError::NotApplicable(d.target));
        }
    }
    Ok(())
}

pub(crate) fn class_of(scenario: &AssessmentScenario, d: &ParameterDistribution) -> UncertaintyClass {
    d.uncertainty_class
        .unwrap_or_else(|| scenario.perspective.class_of(d.target))
}

/// Latin-hypercube draws: one value per stratum `[j/n, (j+1)/n)` of the
/// unit interval, in shuffled order.
fn stratified_draws(d: &ParameterDistribution, n: usize, seed: RandomSeed) -> Vec<f64> {
    let sub = ParamPath::ALL
        .iter()
        .position(|p| *p == d.target)
        .expect("every target is listed") as u64;
    let mut rng = seed.substream(sub);
    let mut strata: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = index(&mut rng, i + 1);
        strata.swap(i, j);
    }
    strata
        .into_iter()
        .map(|j| {
            let upper = (j + 1) as f64 / n as f64;
            let mut u = (j as f64 + unit(&mut rng)) / n as f64;
            if u >= upper {
                u = f64::from_bits(upper.to_bits() - 1);
            }
            d.shape.quantile(u)
        })
        .collect()
}

/// Propagates the scenario's parameter distributions to the effect.
///
/// Each parameter is sampled with Latin-hypercube stratification from its
/// own sub-stream of `seed`; parameters are independent. Parameters without a
/// distribution stay at their central values.
pub fn monte_carlo_assess(
    scenario: &AssessmentScenario,
    options: &MonteCarloOptions,
) -> Result<MonteCarloSummary, UncertaintyError> {
    let n = options.samples;
    if n < MIN_SAMPLES {
        return Err(UncertaintyError::TooFewSamples {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let distributions = &scenario.distributions;
    check_distributions(scenario, distributions)?;

    let draws: Vec<(ParamPath, Vec<f64>)> = distributions
        .iter()
        .map(|d| (d.target, stratified_draws(d, n, options.seed)))
        .collect();
    let central = ScenarioParams::central(scenario);

    let outcomes: Vec<Result<Outcome, _>> = par_map(n, options.workers, |i| {
        let mut p = central.clone();
        for (target, values) in &draws {
            p.set(*target, values[i]);
        }
        evaluate(scenario, &p)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;

    let effect = outcomes.iter().map(|o| o.effect.as_kg()).collect();
    let overstatement: Option<Vec<f64>> = outcomes
        .iter()
        .map(|o| o.naive.map(|c| c.overstatement.as_kg()))
        .collect();
    let window: Option<Vec<f64>> = outcomes
        .iter()
        .map(|o| o.window_effect.map(|w| w.as_kg()))
        .collect();

    let mut data_uncertainty = Vec::new();
    let mut future_uncertainty = Vec::new();
    for d in distributions {
        match class_of(scenario, d) {
            UncertaintyClass::DataUncertainty => data_uncertainty.push(d.target),
            UncertaintyClass::FutureUncertainty => future_uncertainty.push(d.target),
        }
    }
    data_uncertainty.sort();
    future_uncertainty.sort();

    Ok(MonteCarloSummary {
        samples: n,
        seed: options.seed,
        effect: DistributionSummary::from_samples(effect, options.bins),
        overstatement: overstatement.map(|v| DistributionSummary::from_samples(v, options.bins)),
        window_effect: window.map(|v| DistributionSummary::from_samples(v, options.bins)),
        data_uncertainty,
        future_uncertainty,
    })
}
