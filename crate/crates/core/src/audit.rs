//! Rule engine that flags known methodological flaws in a scenario.
//!
//! Flags annotate; they never block a computation. An empty flag list means
//! no modelled flaw was found, not that the assessment is sound.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baseline::BaselineStrategy;
use crate::domain::{AssessmentScenario, Perspective, Sampling, UsageBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Advisory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlagCode {
    ReboundIgnored,
    VolunteerExtrapolation,
    NonrandomK1,
    UsageIntensitySoleBasis,
    FixedBaseline,
    FutureShareReuse,
    HawthorneExposure,
    UncertaintyUntagged,
    MainstreamService,
}

impl FlagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FlagCode::ReboundIgnored => "REBOUND_IGNORED",
            FlagCode::VolunteerExtrapolation => "VOLUNTEER_EXTRAPOLATION",
            FlagCode::NonrandomK1 => "NONRANDOM_K1",
            FlagCode::UsageIntensitySoleBasis => "USAGE_INTENSITY_SOLE_BASIS",
            FlagCode::FixedBaseline => "FIXED_BASELINE",
            FlagCode::FutureShareReuse => "FUTURE_SHARE_REUSE",
            FlagCode::HawthorneExposure => "HAWTHORNE_EXPOSURE",
            FlagCode::UncertaintyUntagged => "UNCERTAINTY_UNTAGGED",
            FlagCode::MainstreamService => "MAINSTREAM_SERVICE",
        }
    }

    /// Methodological topic the rule belongs to. One source per code.
    pub fn rule_source(self) -> &'static str {
        match self {
            FlagCode::ReboundIgnored | FlagCode::FutureShareReuse => "direct-rebound",
            FlagCode::UsageIntensitySoleBasis => "direct-rebound/usage-intensity",
            FlagCode::VolunteerExtrapolation | FlagCode::NonrandomK1 => {
                "case-study-extrapolation"
            }
            FlagCode::HawthorneExposure => "case-study-extrapolation/observation",
            FlagCode::FixedBaseline => "baseline-choice",
            FlagCode::UncertaintyUntagged => "time-perspective",
            FlagCode::MainstreamService => "socio-technical-regime",
        }
    }
}

impl fmt::Display for FlagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFlag {
    pub code: FlagCode,
    pub severity: Severity,
    pub message: String,
    pub rule_source: String,
}

impl AuditFlag {
    fn new(code: FlagCode, severity: Severity, message: impl Into<String>) -> Self {
        AuditFlag {
            code,
            severity,
            message: message.into(),
            rule_source: code.rule_source().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditConfig {
    /// Volunteer-sampled studies extrapolated with a larger k are flagged.
    pub volunteer_k_threshold: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            volunteer_k_threshold: 0.5,
        }
    }
}

type Rule = fn(&AssessmentScenario, &AuditConfig) -> Option<AuditFlag>;

const RULES: &[Rule] = &[
    rebound_ignored,
    volunteer_extrapolation,
    nonrandom_k1,
    usage_intensity_sole_basis,
    fixed_baseline,
    future_share_reuse,
    hawthorne_exposure,
    uncertainty_untagged,
    mainstream_service,
];

fn rebound_ignored(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    if s.evidence.m_count_basis != UsageBasis::TotalServiceUsage || s.has_rebound_data() {
        return None;
    }
    let severity = if s.evidence.zero_rebound_justification.is_some() {
        Severity::Warning
    } else {
        Severity::Error
    };
    Some(AuditFlag::new(
        FlagCode::ReboundIgnored,
        severity,
        "modified usages are derived from total service usage with no rebound usages; \
         every observed usage is credited with a replaced reference activity",
    ))
}

fn volunteer_extrapolation(s: &AssessmentScenario, cfg: &AuditConfig) -> Option<AuditFlag> {
    let cs = s.case_study.as_ref()?;
    (cs.sampling == Sampling::Volunteer && s.coefficient.k > cfg.volunteer_k_threshold).then(|| {
        AuditFlag::new(
            FlagCode::VolunteerExtrapolation,
            Severity::Error,
            format!(
                "volunteer-sampled case study extrapolated with k = {} (threshold {}); \
                 volunteer samples warrant a conservative k around 0.1-0.2",
                s.coefficient.k, cfg.volunteer_k_threshold
            ),
        )
    })
}

fn nonrandom_k1(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    let sampling = s.case_study.as_ref()?.sampling;
    (sampling != Sampling::Random
        && s.coefficient.k == 1.0
        && s.perspective.kind == Perspective::Present)
        .then(|| {
            AuditFlag::new(
                FlagCode::NonrandomK1,
                Severity::Warning,
                format!(
                    "k = 1 is only justified for a randomly sampled case study of the present; \
                     sampling is {sampling:?}"
                ),
            )
        })
}

fn usage_intensity_sole_basis(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    s.evidence.usage_intensity_sole_basis.then(|| {
        AuditFlag::new(
            FlagCode::UsageIntensitySoleBasis,
            Severity::Warning,
            "the modified/rebound split rests on service usage intensity alone; \
             corroborate it with independent evidence",
        )
    })
}

fn fixed_baseline(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    (s.perspective.kind != Perspective::CaseStudy
        && s.baseline.strategy != BaselineStrategy::Projection)
        .then(|| {
            AuditFlag::new(
                FlagCode::FixedBaseline,
                Severity::Warning,
                format!(
                    "perspective {} uses a {} baseline; a projection including expected \
                     efficiency gains is preferred",
                    s.perspective.kind.code(),
                    s.baseline.strategy.as_str()
                ),
            )
        })
}

fn future_share_reuse(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    let reused = s.evidence.reused_share.as_ref()?;
    (s.perspective.kind.is_forward_looking() && s.partition.m_count > reused.source_m_count).then(
        || {
            AuditFlag::new(
                FlagCode::FutureShareReuse,
                Severity::Warning,
                format!(
                    "modified share {:.2}% reused from {} while modified usages grew from {} to {}; \
                     growth in usage is likely rebound",
                    reused.share * 100.0,
                    reused.source_label,
                    reused.source_m_count,
                    s.partition.m_count
                ),
            )
        },
    )
}

fn hawthorne_exposure(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    let note = s.case_study.as_ref()?.observation_note.as_deref()?;
    (!note.trim().is_empty()).then(|| {
        AuditFlag::new(
            FlagCode::HawthorneExposure,
            Severity::Advisory,
            format!("participants may have behaved differently while observed: {note}"),
        )
    })
}

fn uncertainty_untagged(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    if !s.perspective.kind.is_forward_looking() {
        return None;
    }
    let untagged: Vec<&str> = crate::domain::ParamPath::ALL
        .iter()
        .filter(|p| p.is_population_size() && !s.perspective.uncertainty.contains_key(p))
        .map(|p| p.as_str())
        .collect();
    (!untagged.is_empty()).then(|| {
        AuditFlag::new(
            FlagCode::UncertaintyUntagged,
            Severity::Advisory,
            format!(
                "perspective {} leaves {} without a data/future uncertainty class",
                s.perspective.kind.code(),
                untagged.join(", ")
            ),
        )
    })
}

fn mainstream_service(s: &AssessmentScenario, _: &AuditConfig) -> Option<AuditFlag> {
    s.evidence.mainstream.then(|| {
        AuditFlag::new(
            FlagCode::MainstreamService,
            Severity::Advisory,
            "the service is marked as established technology; its effect may already be \
             part of the baseline",
        )
    })
}

/// Runs every rule against `s`. Flags are ordered by severity, then code.
pub fn audit_scenario(s: &AssessmentScenario, config: &AuditConfig) -> Vec<AuditFlag> {
    let mut flags: Vec<AuditFlag> = RULES.iter().filter_map(|rule| rule(s, config)).collect();
    flags.sort_by_key(|f| (f.severity, f.code));
    flags
}

pub fn has_errors(flags: &[AuditFlag]) -> bool {
    flags.iter().any(|f| f.severity == Severity::Error)
}

/// Independent evidence worth collecting when the modified/rebound split is
/// questionable.
pub fn corroboration_checklist(flags: &[AuditFlag]) -> Vec<String> {
    let relevant = flags.iter().any(|f| {
        matches!(
            f.code,
            FlagCode::ReboundIgnored | FlagCode::UsageIntensitySoleBasis | FlagCode::FutureShareReuse
        )
    });
    if !relevant {
        return Vec::new();
    }
    [
        "historical level of the reference activity for the assessed organisation",
        "price trend of the reference activity",
        "change in organisation size over the period",
        "reference-activity rate at comparable organisations without the service",
        "demand drivers specific to the reference activity",
        "sector-wide trends unrelated to the service",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}
