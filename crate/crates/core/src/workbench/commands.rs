use serde::{Deserialize, Serialize};

use super::document::{check_document, Issue, IssueCode, ScenarioDocument, WorkbenchError};
use crate::audit::{audit_scenario, corroboration_checklist, has_errors, AuditConfig, AuditFlag};
use crate::baseline::{
    baseline_table, effect_trajectory, BaselineError, BaselineRow, BaselineStrategy,
    TrajectoryPoint, WithServicePath,
};
use crate::domain::Co2e;
use crate::uncertainty::{
    calibrate_k, default_workers, monte_carlo_assess, sensitivity_tornado, MonteCarloOptions,
    MonteCarloSummary, RandomSeed, TornadoRow,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensitivityMode {
    Tornado,
    Montecarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub mode: SensitivityMode,
    pub tornado: Option<Vec<TornadoRow>>,
    pub monte_carlo: Option<MonteCarloSummary>,
}

fn no_distributions() -> WorkbenchError {
    WorkbenchError::single(Issue::new(
        IssueCode::Computation,
        "scenario.distributions",
        "sensitivity analysis needs at least one parameter distribution",
    ))
}

pub fn run_sensitivity(
    doc: &ScenarioDocument,
    mode: SensitivityMode,
    samples: usize,
    seed: u64,
) -> Result<SensitivityReport, WorkbenchError> {
    check_document(doc)?;
    let s = &doc.scenario;
    if s.distributions.is_empty() {
        return Err(no_distributions());
    }
    let err = |e| WorkbenchError::computation("scenario.distributions", e);
    Ok(match mode {
        SensitivityMode::Tornado => SensitivityReport {
            mode,
            tornado: Some(sensitivity_tornado(s, &s.distributions).map_err(err)?),
            monte_carlo: None,
        },
        SensitivityMode::Montecarlo => {
            let options =
                MonteCarloOptions::new(samples, RandomSeed::new(seed)).with_workers(default_workers());
            SensitivityReport {
                mode,
                tornado: None,
                monte_carlo: Some(monte_carlo_assess(s, &options).map_err(err)?),
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub strategy: BaselineStrategy,
    pub horizon: u32,
    pub rows: Vec<BaselineRow>,
    /// Present when the scenario has a with-service path; it is cut to the
    /// horizon.
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

fn truncate(path: &WithServicePath, n: usize) -> WithServicePath {
    WithServicePath {
        central: path.central[..n].to_vec(),
        lo: path.lo.as_ref().map(|v| v[..n].to_vec()),
        hi: path.hi.as_ref().map(|v| v[..n].to_vec()),
    }
}

pub fn run_baseline(doc: &ScenarioDocument, horizon: u32) -> Result<BaselineReport, WorkbenchError> {
    check_document(doc)?;
    let s = &doc.scenario;
    let err = |e| WorkbenchError::computation("scenario.baseline", e);
    let rows = baseline_table(&s.baseline, horizon).map_err(err)?;
    let trajectory = match &s.with_service {
        None => None,
        Some(path) => {
            let n = horizon as usize;
            if path.len() < n {
                return Err(WorkbenchError::computation(
                    "scenario.with_service",
                    BaselineError::LengthMismatch {
                        got: path.len(),
                        needed: n,
                    },
                ));
            }
            Some(effect_trajectory(&s.baseline, &truncate(path, n)).map_err(err)?)
        }
    };
    Ok(BaselineReport {
        strategy: s.baseline.strategy,
        horizon,
        rows,
        trajectory,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub flags: Vec<AuditFlag>,
    pub has_errors: bool,
    pub checklist: Vec<String>,
}

/// Audits a document. Validation problems are errors; flags never are.
pub fn run_audit(doc: &ScenarioDocument) -> Result<AuditReport, WorkbenchError> {
    check_document(doc)?;
    let flags = audit_scenario(&doc.scenario, &AuditConfig::default());
    Ok(AuditReport {
        has_errors: has_errors(&flags),
        checklist: corroboration_checklist(&flags),
        flags,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub case_study_average: Co2e,
    pub population_average: Co2e,
    pub k: f64,
}

pub fn run_calibration(
    case_study_average: Co2e,
    population_average: Co2e,
) -> Result<CalibrationReport, WorkbenchError> {
    let k = calibrate_k(case_study_average, population_average)
        .map_err(|e| WorkbenchError::computation("", e))?;
    Ok(CalibrationReport {
        case_study_average,
        population_average,
        k,
    })
}
