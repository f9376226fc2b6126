//! Evaluates a scenario at a given parameter vector.
//!
//! The deterministic assessment, the tornado analysis and every Monte Carlo
//! sample go through [`evaluate`], so a point-mass Monte Carlo run reproduces
//! the deterministic result bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::{effect_trajectory, BaselineError, BaselineModel, BaselineStrategy};
use crate::domain::{
    AssessmentScenario, Co2e, EstimationPath, ExtrapolationCoefficient, ParamPath,
};
use crate::engine::{self, EngineError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("estimation path `{path}` requires `{field}`")]
    MissingInput {
        path: &'static str,
        field: &'static str,
    },
    #[error("parameter `{param}` has invalid value {value}")]
    InvalidParameter { param: ParamPath, value: f64 },
}

/// Values of every variable parameter of a scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub k: f64,
    pub m_count: f64,
    pub r_count: f64,
    pub rebound_share: Option<f64>,
    /// kg CO2e per usage.
    pub model_average: Option<f64>,
    pub growth: f64,
    pub efficiency: f64,
}

impl ScenarioParams {
    pub fn central(s: &AssessmentScenario) -> Self {
        ScenarioParams {
            k: s.coefficient.k,
            m_count: s.partition.m_count as f64,
            r_count: s.partition.r_count as f64,
            rebound_share: s.rebound_share,
            model_average: s.model_average.map(Co2e::as_kg),
            growth: s.baseline.growth,
            efficiency: s.baseline.efficiency,
        }
    }

    /// Central value of `param`; unset optional parameters read as zero.
    pub fn get(&self, param: ParamPath) -> f64 {
        match param {
            ParamPath::CoefficientK => self.k,
            ParamPath::MCount => self.m_count,
            ParamPath::RCount => self.r_count,
            ParamPath::ReboundShare => self.rebound_share.unwrap_or(0.0),
            ParamPath::ModelAverage => self.model_average.unwrap_or(0.0),
            ParamPath::BaselineGrowth => self.growth,
            ParamPath::BaselineEfficiency => self.efficiency,
        }
    }

    pub fn set(&mut self, param: ParamPath, value: f64) {
        match param {
            ParamPath::CoefficientK => self.k = value,
            ParamPath::MCount => self.m_count = value,
            ParamPath::RCount => self.r_count = value,
            ParamPath::ReboundShare => self.rebound_share = Some(value),
            ParamPath::ModelAverage => self.model_average = Some(value),
            ParamPath::BaselineGrowth => self.growth = value,
            ParamPath::BaselineEfficiency => self.efficiency = value,
        }
    }

    /// Number of modified usages the effect is scaled to. A rebound share
    /// re-splits the observed usages into modified and rebound.
    pub fn modified_target(&self) -> Result<f64, EvalError> {
        let m = engine::count("m_count", self.m_count)?;
        match self.rebound_share {
            None => Ok(m),
            Some(rho) => {
                check_share(rho)?;
                let r = engine::count("r_count", self.r_count)?;
                Ok((1.0 - rho) * (m + r))
            }
        }
    }
}

fn check_share(rho: f64) -> Result<(), EvalError> {
    if rho.is_finite() && (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(EvalError::InvalidParameter {
            param: ParamPath::ReboundShare,
            value: rho,
        })
    }
}

/// Whether varying `param` can change any output of `s`.
pub fn is_applicable(s: &AssessmentScenario, param: ParamPath) -> bool {
    match param {
        ParamPath::CoefficientK => s.estimation == EstimationPath::CaseStudy,
        ParamPath::MCount | ParamPath::RCount => {
            matches!(s.estimation, EstimationPath::CaseStudy | EstimationPath::Model)
        }
        ParamPath::ReboundShare => true,
        ParamPath::ModelAverage => s.estimation == EstimationPath::Model,
        ParamPath::BaselineGrowth | ParamPath::BaselineEfficiency => {
            s.with_service.is_some() && s.baseline.strategy == BaselineStrategy::Projection
        }
    }
}

/// What the naive figure in a [`NaiveComparison`] gets wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NaiveBasis {
    /// Every service usage is credited with a replaced reference activity.
    /// The overstatement is the reference footprint of the rebound usages.
    ReboundUsagesCredited,
    /// The footprint of the case study's rebound instances is left out.
    ReboundFootprintOmitted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveComparison {
    pub basis: NaiveBasis,
    pub naive: Co2e,
    pub overstatement: Co2e,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub effect: Co2e,
    pub naive: Option<NaiveComparison>,
    /// Summed per-period effect over the with-service window.
    pub window_effect: Option<Co2e>,
}

pub fn evaluate(s: &AssessmentScenario, p: &ScenarioParams) -> Result<Outcome, EvalError> {
    let (effect, naive) = match s.estimation {
        EstimationPath::CaseStudy => {
            let cs = s.case_study.as_ref().ok_or(EvalError::MissingInput {
                path: "case_study",
                field: "case_study",
            })?;
            let coeff = ExtrapolationCoefficient {
                k: p.k,
                source: s.coefficient.source,
            };
            let m_target = p.modified_target()?;
            let effect = engine::full_pipeline(cs, m_target, &coeff)?;
            let naive = if cs.rebound.is_empty() {
                None
            } else {
                let naive =
                    engine::extrapolate(engine::case_study_average(cs)?, m_target, &coeff)?;
                Some(NaiveComparison {
                    basis: NaiveBasis::ReboundFootprintOmitted,
                    naive,
                    overstatement: naive - effect,
                })
            };
            (effect, naive)
        }
        EstimationPath::Model => {
            let e_mod = p.model_average.ok_or(EvalError::MissingInput {
                path: "model",
                field: "model_average",
            })?;
            (engine::model_based_effect(Co2e::kg(e_mod), p.modified_target()?)?, None)
        }
        EstimationPath::Aggregate => {
            let agg = s.partition.aggregates.as_ref().ok_or(EvalError::MissingInput {
                path: "aggregate",
                field: "partition.aggregates",
            })?;
            let (fp_a_m, fp_a_r) = match p.rebound_share {
                None => (agg.fp_a_m, agg.fp_a_r),
                Some(rho) => {
                    check_share(rho)?;
                    let total = agg.fp_a_m + agg.fp_a_r.unwrap_or(Co2e::ZERO);
                    (total * (1.0 - rho), Some(total * rho))
                }
            };
            let effect = engine::effect_with_rebound(fp_a_m, agg.fp_a_opt_mr, agg.fp_s_mr)?;
            let naive = match fp_a_r {
                None => None,
                Some(fp_a_r) => {
                    let d = engine::naive_effect_and_overstatement(
                        fp_a_m + fp_a_r,
                        fp_a_r,
                        agg.fp_a_opt_mr,
                        agg.fp_s_mr,
                    )?;
                    Some(NaiveComparison {
                        basis: NaiveBasis::ReboundUsagesCredited,
                        naive: d.naive,
                        overstatement: d.overstatement,
                    })
                }
            };
            (effect, naive)
        }
    };

    let window_effect = match &s.with_service {
        None => None,
        Some(path) => {
            let model = baseline_at(&s.baseline, p);
            Some(effect_trajectory(&model, path)?.iter().map(|pt| pt.effect).sum())
        }
    };

    Ok(Outcome {
        effect,
        naive,
        window_effect,
    })
}

/// The scenario's baseline with growth and efficiency taken from `p`.
pub fn baseline_at(model: &BaselineModel, p: &ScenarioParams) -> BaselineModel {
    let mut model = model.clone();
    if model.strategy == BaselineStrategy::Projection {
        model.growth = p.growth;
        model.efficiency = p.efficiency;
        // sampled rates may leave the stated cone; widen it to keep the
        // bracket valid
        if let Some(c) = model.cone.as_mut() {
            c.g_lo = c.g_lo.min(p.growth);
            c.g_hi = c.g_hi.max(p.growth);
            c.e_lo = c.e_lo.min(p.efficiency);
            c.e_hi = c.e_hi.max(p.efficiency);
        }
    }
    model
}
