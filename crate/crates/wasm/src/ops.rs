//! The operations behind the browser demo, as plain functions over JSON
//! text so they can be tested natively.

use std::collections::BTreeMap;

use ictimpact_core::audit::{audit_scenario, AuditConfig, AuditFlag};
use ictimpact_core::baseline::{effect_trajectory, TrajectoryPoint};
use ictimpact_core::domain::{AssessmentScenario, EstimationPath, ParamPath};
use ictimpact_core::evaluate::{baseline_at, evaluate, ScenarioParams};
use ictimpact_core::workbench::{
    parse_scenario, to_canonical_json, Issue, IssueCode, ParseMode, WorkbenchError,
};
use serde::Serialize;

/// Parameter values set by the sliders, keyed like distribution targets
/// (`coefficient.k`, `rebound_share`, `baseline.growth`, ...).
pub type Overrides = BTreeMap<ParamPath, f64>;

#[derive(Debug, Serialize)]
pub struct WhatIf {
    pub effect_kg: f64,
    pub naive_kg: Option<f64>,
    pub overstatement_kg: Option<f64>,
    pub window_effect_kg: Option<f64>,
    pub modified_usages: Option<f64>,
    pub params: BTreeMap<ParamPath, f64>,
    pub audit_flags: Vec<AuditFlag>,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub rebound_share: f64,
    pub effect_kg: f64,
    pub naive_kg: Option<f64>,
    pub overstatement_kg: Option<f64>,
}

fn error_json(err: WorkbenchError) -> String {
    serde_json::json!({ "errors": err.issues }).to_string()
}

fn load(doc_json: &str, overrides_json: &str) -> Result<(AssessmentScenario, ScenarioParams), WorkbenchError> {
    let doc = parse_scenario(doc_json, ParseMode::Strict)?;
    let overrides: Overrides = if overrides_json.trim().is_empty() {
        Overrides::new()
    } else {
        serde_json::from_str(overrides_json).map_err(|e| {
            WorkbenchError::single(Issue::new(IssueCode::InvalidValue, "overrides", e.to_string()))
        })?
    };
    let mut params = ScenarioParams::central(&doc.scenario);
    for (param, value) in overrides {
        params.set(param, value);
    }
    Ok((doc.scenario, params))
}

/// The scenario with slider values written back, so the audit sees them.
fn with_params(mut s: AssessmentScenario, p: &ScenarioParams) -> AssessmentScenario {
    s.coefficient.k = p.k;
    s.partition.m_count = p.m_count.round() as i64;
    s.partition.r_count = p.r_count.round() as i64;
    s.rebound_share = p.rebound_share;
    s.baseline = baseline_at(&s.baseline, p);
    s
}

fn what_if_inner(doc_json: &str, overrides_json: &str) -> Result<WhatIf, WorkbenchError> {
    let (s, p) = load(doc_json, overrides_json)?;
    let out = evaluate(&s, &p).map_err(|e| WorkbenchError::computation("scenario", e))?;
    let modified_usages = match s.estimation {
        EstimationPath::Aggregate => None,
        _ => Some(p.modified_target().map_err(|e| WorkbenchError::computation("scenario.partition", e))?),
    };
    Ok(WhatIf {
        effect_kg: out.effect.as_kg(),
        naive_kg: out.naive.map(|n| n.naive.as_kg()),
        overstatement_kg: out.naive.map(|n| n.overstatement.as_kg()),
        window_effect_kg: out.window_effect.map(|w| w.as_kg()),
        modified_usages,
        params: ParamPath::ALL.iter().map(|&q| (q, p.get(q))).collect(),
        audit_flags: audit_scenario(&with_params(s, &p), &AuditConfig::default()),
    })
}

/// Headline results of the document with `overrides` applied.
pub fn what_if(doc_json: &str, overrides_json: &str) -> Result<String, String> {
    what_if_inner(doc_json, overrides_json)
        .map(|w| to_canonical_json(&w))
        .map_err(error_json)
}

/// Effect, naive effect and overstatement at `points` evenly spaced rebound
/// shares from 0 to 1, other parameters taken from `overrides`.
pub fn rebound_sweep(doc_json: &str, overrides_json: &str, points: u32) -> Result<String, String> {
    let sweep = || -> Result<Vec<SweepPoint>, WorkbenchError> {
        let (s, base) = load(doc_json, overrides_json)?;
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let rho = i as f64 / (n - 1) as f64;
                let mut p = base.clone();
                p.rebound_share = Some(rho);
                let out = evaluate(&s, &p).map_err(|e| WorkbenchError::computation("rebound_share", e))?;
                Ok(SweepPoint {
                    rebound_share: rho,
                    effect_kg: out.effect.as_kg(),
                    naive_kg: out.naive.map(|n| n.naive.as_kg()),
                    overstatement_kg: out.naive.map(|n| n.overstatement.as_kg()),
                })
            })
            .collect()
    };
    sweep().map(|v| to_canonical_json(&v)).map_err(error_json)
}

/// Baseline cone and per-period effect over the with-service window, with
/// growth and efficiency taken from `overrides`.
pub fn baseline_trajectory(doc_json: &str, overrides_json: &str) -> Result<String, String> {
    let run = || -> Result<Vec<TrajectoryPoint>, WorkbenchError> {
        let (s, p) = load(doc_json, overrides_json)?;
        let path = s.with_service.as_ref().ok_or_else(|| {
            WorkbenchError::single(Issue::new(
                IssueCode::Validation,
                "scenario.with_service",
                "the document has no with-service path",
            ))
        })?;
        effect_trajectory(&baseline_at(&s.baseline, &p), path)
            .map_err(|e| WorkbenchError::computation("scenario.baseline", e))
    };
    run().map(|v| to_canonical_json(&v)).map_err(error_json)
}
