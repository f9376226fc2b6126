use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::document::{check_document, ScenarioDocument, WorkbenchError};
use crate::audit::{audit_scenario, corroboration_checklist, has_errors, AuditConfig, AuditFlag};
use crate::baseline::{baseline_table, effect_trajectory, BaselineRow, TrajectoryPoint};
use crate::domain::{Co2e, EstimationPath, Perspective};
use crate::evaluate::{evaluate, NaiveBasis, ScenarioParams};
use crate::uncertainty::{
    bootstrap_interval_with_rebound, default_workers, monte_carlo_assess, sensitivity_tornado,
    BootstrapInterval, MonteCarloOptions, MonteCarloSummary, RandomSeed, TornadoRow,
    DEFAULT_RESAMPLES, DEFAULT_SAMPLES,
};

pub const REPORT_VERSION: u32 = 1;
/// Baseline periods tabulated when neither the options nor a with-service
/// path fix the horizon.
pub const DEFAULT_HORIZON: u32 = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub seed: u64,
    pub confidence: f64,
    pub resamples: usize,
    pub samples: usize,
    pub horizon: Option<u32>,
    /// Results do not depend on this, so it is not part of the report.
    #[serde(skip, default = "default_workers")]
    pub workers: usize,
}

impl RunOptions {
    pub fn new(seed: u64) -> Self {
        RunOptions {
            seed,
            confidence: 0.95,
            resamples: DEFAULT_RESAMPLES,
            samples: DEFAULT_SAMPLES,
            horizon: None,
            workers: default_workers(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMethod {
    /// Percentile bootstrap over case-study instances, scaled to the target.
    Bootstrap,
    /// 5th to 95th percentile of the Monte Carlo effect distribution.
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectInterval {
    pub lo: Co2e,
    pub hi: Co2e,
    pub confidence: f64,
    pub method: IntervalMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub schema_version: u32,
    /// SHA-256 of the canonical input document.
    pub input_sha256: String,
    pub engine_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssessmentResult {
    pub perspective: Perspective,
    pub estimation: EstimationPath,
    pub effect: Co2e,
    /// Modified usages the effect is scaled to; absent on the aggregate path.
    pub modified_usages: Option<f64>,
    pub interval: Option<EffectInterval>,
    pub naive_effect: Option<Co2e>,
    pub overstatement: Option<Co2e>,
    pub naive_basis: Option<NaiveBasis>,
    pub window_effect: Option<Co2e>,
    pub audit_flags: Vec<AuditFlag>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub report_version: u32,
    pub result: AssessmentResult,
    pub baseline: Vec<BaselineRow>,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    /// Interval of the rebound-corrected per-usage average.
    pub bootstrap: Option<BootstrapInterval>,
    pub tornado: Option<Vec<TornadoRow>>,
    pub monte_carlo: Option<MonteCarloSummary>,
    pub checklist: Vec<String>,
    pub options: RunOptions,
    pub input: ScenarioDocument,
}

impl AssessmentReport {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.result.audit_flags)
    }
}

pub fn input_digest(doc: &ScenarioDocument) -> String {
    let canonical = super::document::serialize_document(doc);
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn provenance(doc: &ScenarioDocument, seed: u64) -> Provenance {
    Provenance {
        seed,
        schema_version: doc.schema_version,
        input_sha256: input_digest(doc),
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Runs the full assessment of a parsed document. Identical documents and
/// options give byte-identical reports.
pub fn run_assessment(
    doc: &ScenarioDocument,
    options: &RunOptions,
) -> Result<AssessmentReport, WorkbenchError> {
    check_document(doc)?;
    let s = &doc.scenario;
    let seed = RandomSeed::new(options.seed);
    let central = ScenarioParams::central(s);
    let outcome = evaluate(s, &central).map_err(|e| WorkbenchError::computation("scenario", e))?;

    let modified_usages = match s.estimation {
        EstimationPath::Aggregate => None,
        _ => Some(
            central
                .modified_target()
                .map_err(|e| WorkbenchError::computation("scenario.partition", e))?,
        ),
    };

    let bootstrap = match (&s.case_study, s.estimation) {
        (Some(cs), EstimationPath::CaseStudy) if cs.modified.len() >= 2 => Some(
            bootstrap_interval_with_rebound(
                cs,
                options.confidence,
                options.resamples,
                seed,
                options.workers,
            )
            .map_err(|e| WorkbenchError::computation("scenario.case_study", e))?,
        ),
        _ => None,
    };

    let (tornado, monte_carlo) = if s.distributions.is_empty() {
        (None, None)
    } else {
        let tornado = sensitivity_tornado(s, &s.distributions)
            .map_err(|e| WorkbenchError::computation("scenario.distributions", e))?;
        let mc = monte_carlo_assess(
            s,
            &MonteCarloOptions::new(options.samples, seed).with_workers(options.workers),
        )
        .map_err(|e| WorkbenchError::computation("scenario.distributions", e))?;
        (Some(tornado), Some(mc))
    };

    let interval = if let (Some(b), Some(m)) = (&bootstrap, modified_usages) {
        let scale = s.coefficient.k * m;
        Some(EffectInterval {
            lo: b.lo * scale,
            hi: b.hi * scale,
            confidence: b.confidence,
            method: IntervalMethod::Bootstrap,
        })
    } else {
        monte_carlo.as_ref().map(|mc| EffectInterval {
            lo: Co2e::kg(mc.effect.p05),
            hi: Co2e::kg(mc.effect.p95),
            confidence: 0.90,
            method: IntervalMethod::MonteCarlo,
        })
    };

    let horizon = options
        .horizon
        .or_else(|| s.with_service.as_ref().map(|w| w.len() as u32))
        .unwrap_or(DEFAULT_HORIZON);
    let baseline = baseline_table(&s.baseline, horizon)
        .map_err(|e| WorkbenchError::computation("scenario.baseline", e))?;
    let trajectory = match &s.with_service {
        None => None,
        Some(path) => Some(
            effect_trajectory(&s.baseline, path)
                .map_err(|e| WorkbenchError::computation("scenario.with_service", e))?,
        ),
    };

    let audit_flags = audit_scenario(s, &AuditConfig::default());
    let checklist = corroboration_checklist(&audit_flags);

    Ok(AssessmentReport {
        report_version: REPORT_VERSION,
        result: AssessmentResult {
            perspective: s.perspective.kind,
            estimation: s.estimation,
            effect: outcome.effect,
            modified_usages,
            interval,
            naive_effect: outcome.naive.map(|n| n.naive),
            overstatement: outcome.naive.map(|n| n.overstatement),
            naive_basis: outcome.naive.map(|n| n.basis),
            window_effect: outcome.window_effect,
            audit_flags,
            provenance: provenance(doc, options.seed),
        },
        baseline,
        trajectory,
        bootstrap,
        tornado,
        monte_carlo,
        checklist,
        options: options.clone(),
        input: doc.clone(),
    })
}

fn tonnes(q: Co2e) -> String {
    format!("{:.3} tCO2e", q.as_tonnes())
}

/// Plain-text rendering for terminals.
pub fn render_human(report: &AssessmentReport) -> String {
    let r = &report.result;
    let doc = &report.input;
    let mut out = String::new();
    let title = if doc.metadata.title.is_empty() {
        format!("{} / {}", doc.scenario.service_id, doc.scenario.activity_id)
    } else {
        doc.metadata.title.clone()
    };
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "perspective {}  estimation {}  period {}",
        r.perspective.code(),
        r.estimation.as_str(),
        doc.scenario.period.label
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "induced effect     {}", tonnes(r.effect));
    if let Some(m) = r.modified_usages {
        let _ = writeln!(out, "modified usages    {m}");
    }
    if let Some(iv) = &r.interval {
        let _ = writeln!(
            out,
            "{:.0}% interval       [{}, {}] ({})",
            iv.confidence * 100.0,
            tonnes(iv.lo),
            tonnes(iv.hi),
            match iv.method {
                IntervalMethod::Bootstrap => "bootstrap",
                IntervalMethod::MonteCarlo => "monte carlo",
            }
        );
    }
    if let (Some(naive), Some(over)) = (r.naive_effect, r.overstatement) {
        let _ = writeln!(out, "naive effect       {}", tonnes(naive));
        let _ = writeln!(out, "overstatement      {}", tonnes(over));
    }
    if let Some(w) = r.window_effect {
        let _ = writeln!(out, "window effect      {}", tonnes(w));
    }
    if let Some(rows) = &report.tornado {
        let _ = writeln!(out, "\nsensitivity (largest swing first)");
        for row in rows {
            let _ = writeln!(
                out,
                "  {:<20} {:>14}  [{} .. {}]",
                row.parameter.as_str(),
                tonnes(row.swing),
                row.low_value,
                row.high_value
            );
        }
    }
    if let Some(mc) = &report.monte_carlo {
        let e = &mc.effect;
        let _ = writeln!(
            out,
            "\nmonte carlo ({} samples): mean {}  p05 {}  p50 {}  p95 {}",
            mc.samples,
            tonnes(Co2e::kg(e.mean)),
            tonnes(Co2e::kg(e.p05)),
            tonnes(Co2e::kg(e.p50)),
            tonnes(Co2e::kg(e.p95))
        );
    }
    let _ = writeln!(out, "\naudit flags");
    if r.audit_flags.is_empty() {
        let _ = writeln!(out, "  none (no modelled flaw found)");
    }
    for f in &r.audit_flags {
        let _ = writeln!(out, "  {:<8} {}: {}", format!("{:?}", f.severity).to_lowercase(), f.code, f.message);
    }
    if !report.checklist.is_empty() {
        let _ = writeln!(out, "\ncorroborate with");
        for item in &report.checklist {
            let _ = writeln!(out, "  - {item}");
        }
    }
    let _ = writeln!(
        out,
        "\nseed {}  input sha256 {}",
        r.provenance.seed, r.provenance.input_sha256
    );
    out
}
