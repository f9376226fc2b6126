use serde::{Deserialize, Serialize};

use super::distribution::ParameterDistribution;
use super::montecarlo::{check_distributions, class_of};
use super::UncertaintyError;
use crate::domain::{AssessmentScenario, Co2e, ParamPath, UncertaintyClass};
use crate::evaluate::{evaluate, ScenarioParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TornadoRow {
    pub parameter: ParamPath,
    pub uncertainty_class: UncertaintyClass,
    pub low_value: f64,
    pub high_value: f64,
    pub low_effect: Co2e,
    pub high_effect: Co2e,
    /// `high_effect - low_effect`.
    pub swing: Co2e,
}

/// One-at-a-time sensitivity: each parameter is moved to its lower and upper
/// bound with every other parameter at its central value. Rows are ranked by
/// absolute swing, largest first; ties go by parameter path.
pub fn sensitivity_tornado(
    scenario: &AssessmentScenario,
    parameters: &[ParameterDistribution],
) -> Result<Vec<TornadoRow>, UncertaintyError> {
    check_distributions(scenario, parameters)?;
    let central = ScenarioParams::central(scenario);
    let mut rows = parameters
        .iter()
        .map(|d| {
            let (lo, hi) = d.shape.bounds();
            let at = |v: f64| {
                let mut p = central.clone();
                p.set(d.target, v);
                evaluate(scenario, &p).map(|o| o.effect)
            };
            let low_effect = at(lo)?;
            let high_effect = at(hi)?;
            Ok(TornadoRow {
                parameter: d.target,
                uncertainty_class: class_of(scenario, d),
                low_value: lo,
                high_value: hi,
                low_effect,
                high_effect,
                swing: high_effect - low_effect,
            })
        })
        .collect::<Result<Vec<_>, UncertaintyError>>()?;
    rows.sort_by(|a, b| {
        b.swing
            .as_kg()
            .abs()
            .total_cmp(&a.swing.as_kg().abs())
            .then_with(|| a.parameter.as_str().cmp(b.parameter.as_str()))
    });
    Ok(rows)
}
