use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::quantity::{approx_eq, Co2e};
use super::scenario::{
    AssessmentScenario, CaseStudy, CoefficientSource, EstimationPath, ExtrapolationCoefficient,
    Mechanism, Sampling,
};
use crate::baseline::{BaselineModel, BaselineStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    NegativeCardinality,
    NegativeFootprint,
    NonFinite,
    OptimizedFootprintInSubstitution,
    MissingEstimationInput,
    EmptyCaseStudy,
    DuplicateInstanceId,
    AggregateMismatch,
    InvalidCoefficient,
    CoefficientSourceMismatch,
    DefaultCoefficientForUnknownSampling,
    InvalidReboundShare,
    InvalidBaseline,
    InvalidWithServicePath,
    InvalidDistribution,
    DuplicateDistribution,
    InvalidReusedShare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// Dotted field path inside the scenario, e.g. `partition.m_count`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    fn push(&mut self, code: ViolationCode, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            code,
            path: path.into(),
            message: message.into(),
        });
    }

    fn footprint(&mut self, path: impl Into<String>, q: Co2e) {
        let v = q.as_kg();
        if !v.is_finite() {
            self.push(ViolationCode::NonFinite, path, format!("non-finite value {v}"));
        } else if v < 0.0 {
            self.push(ViolationCode::NegativeFootprint, path, format!("negative footprint {v}"));
        }
    }

    fn optimized(&mut self, mechanism: Mechanism, path: impl Into<String>, q: Co2e) {
        let path = path.into();
        self.footprint(path.clone(), q);
        if mechanism == Mechanism::Substitution && q.as_kg() != 0.0 {
            self.push(
                ViolationCode::OptimizedFootprintInSubstitution,
                path,
                format!("optimized footprint in substitution ({q})"),
            );
        }
    }
}

/// Collects every invariant violation of `s`. An empty report means valid.
pub fn validate_scenario(s: &AssessmentScenario) -> ValidationReport {
    let mut r = ValidationReport::default();
    let mech = s.mechanism;

    for (name, n) in [
        ("m_count", s.partition.m_count),
        ("n_count", s.partition.n_count),
        ("r_count", s.partition.r_count),
    ] {
        if n < 0 {
            r.push(
                ViolationCode::NegativeCardinality,
                format!("partition.{name}"),
                format!("negative cardinality ({n})"),
            );
        }
    }

    if let Some(agg) = &s.partition.aggregates {
        r.footprint("partition.aggregates.fp_a_m", agg.fp_a_m);
        r.footprint("partition.aggregates.fp_a_n", agg.fp_a_n);
        if let Some(fp_a_r) = agg.fp_a_r {
            r.footprint("partition.aggregates.fp_a_r", fp_a_r);
        }
        r.optimized(mech, "partition.aggregates.fp_a_opt_mr", agg.fp_a_opt_mr);
        r.footprint("partition.aggregates.fp_s_mr", agg.fp_s_mr);
    }

    if let Some(cs) = &s.case_study {
        check_case_study(&mut r, mech, cs);
    }

    if let Some(e) = s.model_average {
        if !e.is_finite() {
            r.push(ViolationCode::NonFinite, "model_average", "non-finite per-usage effect");
        }
    }

    match s.estimation {
        EstimationPath::CaseStudy => match &s.case_study {
            None => r.push(
                ViolationCode::MissingEstimationInput,
                "case_study",
                "estimation path `case_study` requires a case study",
            ),
            Some(cs) if cs.modified.is_empty() => r.push(
                ViolationCode::EmptyCaseStudy,
                "case_study.modified",
                "no modified instances",
            ),
            Some(_) => {}
        },
        EstimationPath::Model if s.model_average.is_none() => r.push(
            ViolationCode::MissingEstimationInput,
            "model_average",
            "estimation path `model` requires model_average",
        ),
        EstimationPath::Aggregate if s.partition.aggregates.is_none() => r.push(
            ViolationCode::MissingEstimationInput,
            "partition.aggregates",
            "estimation path `aggregate` requires partition aggregates",
        ),
        _ => {}
    }

    check_coefficient(&mut r, &s.coefficient, s.case_study.as_ref().map(|c| c.sampling));

    if let Some(rho) = s.rebound_share {
        if !(rho.is_finite() && (0.0..=1.0).contains(&rho)) {
            r.push(
                ViolationCode::InvalidReboundShare,
                "rebound_share",
                format!("rebound share must lie in [0, 1], got {rho}"),
            );
        }
    }

    check_baseline(&mut r, &s.baseline);

    if let Some(path) = &s.with_service {
        for (i, q) in path.central.iter().enumerate() {
            r.footprint(format!("with_service.central[{i}]"), *q);
        }
        for (name, bound) in [("lo", &path.lo), ("hi", &path.hi)] {
            if let Some(b) = bound {
                if b.len() != path.central.len() {
                    r.push(
                        ViolationCode::InvalidWithServicePath,
                        format!("with_service.{name}"),
                        format!("{} periods, central path has {}", b.len(), path.central.len()),
                    );
                }
                for (i, q) in b.iter().enumerate() {
                    r.footprint(format!("with_service.{name}[{i}]"), *q);
                }
            }
        }
        if let (Some(lo), Some(hi)) = (&path.lo, &path.hi) {
            let ordered = lo
                .iter()
                .zip(&path.central)
                .zip(hi)
                .all(|((l, c), h)| l <= c && c <= h);
            if !ordered {
                r.push(
                    ViolationCode::InvalidWithServicePath,
                    "with_service",
                    "bounds must satisfy lo <= central <= hi in every period",
                );
            }
        }
    }

    let mut seen = BTreeSet::new();
    for (i, d) in s.distributions.iter().enumerate() {
        if let Err(reason) = d.shape.check() {
            r.push(
                ViolationCode::InvalidDistribution,
                format!("distributions[{i}].shape"),
                reason,
            );
        }
        if !seen.insert(d.target) {
            r.push(
                ViolationCode::DuplicateDistribution,
                format!("distributions[{i}].target"),
                format!("`{}` already has a distribution", d.target),
            );
        }
    }

    if let Some(reused) = &s.evidence.reused_share {
        if !(reused.share.is_finite() && (0.0..=1.0).contains(&reused.share)) {
            r.push(
                ViolationCode::InvalidReusedShare,
                "evidence.reused_share.share",
                format!("share must lie in [0, 1], got {}", reused.share),
            );
        }
        if reused.source_m_count < 0 {
            r.push(
                ViolationCode::NegativeCardinality,
                "evidence.reused_share.source_m_count",
                format!("negative cardinality ({})", reused.source_m_count),
            );
        }
    }

    r
}

fn check_case_study(r: &mut ValidationReport, mech: Mechanism, cs: &CaseStudy) {
    let mut ids = BTreeSet::new();
    for (i, inst) in cs.modified.iter().enumerate() {
        let base = format!("case_study.modified[{i}]");
        r.footprint(format!("{base}.fp_a"), inst.fp_a);
        r.optimized(mech, format!("{base}.fp_a_opt"), inst.fp_a_opt);
        r.footprint(format!("{base}.fp_s"), inst.fp_s);
        if !ids.insert(inst.id.as_str()) {
            r.push(
                ViolationCode::DuplicateInstanceId,
                format!("{base}.id"),
                format!("duplicate instance id `{}`", inst.id),
            );
        }
    }
    for (i, inst) in cs.rebound.iter().enumerate() {
        let base = format!("case_study.rebound[{i}]");
        r.optimized(mech, format!("{base}.fp_a_opt"), inst.fp_a_opt);
        r.footprint(format!("{base}.fp_s"), inst.fp_s);
        if !ids.insert(inst.id.as_str()) {
            r.push(
                ViolationCode::DuplicateInstanceId,
                format!("{base}.id"),
                format!("duplicate instance id `{}`", inst.id),
            );
        }
    }
    if let Some(t) = &cs.totals {
        let fp_a_m: Co2e = cs.modified.iter().map(|i| i.fp_a).sum();
        let fp_a_opt_mr: Co2e = cs
            .modified
            .iter()
            .map(|i| i.fp_a_opt)
            .chain(cs.rebound.iter().map(|i| i.fp_a_opt))
            .sum();
        let fp_s_mr: Co2e = cs
            .modified
            .iter()
            .map(|i| i.fp_s)
            .chain(cs.rebound.iter().map(|i| i.fp_s))
            .sum();
        for (name, stored, summed) in [
            ("fp_a_m", t.fp_a_m, fp_a_m),
            ("fp_a_opt_mr", t.fp_a_opt_mr, fp_a_opt_mr),
            ("fp_s_mr", t.fp_s_mr, fp_s_mr),
        ] {
            if !approx_eq(stored.as_kg(), summed.as_kg()) {
                r.push(
                    ViolationCode::AggregateMismatch,
                    format!("case_study.totals.{name}"),
                    format!("stored total {stored} differs from instance sum {summed}"),
                );
            }
        }
    }
}

fn check_coefficient(
    r: &mut ValidationReport,
    c: &ExtrapolationCoefficient,
    sampling: Option<Sampling>,
) {
    if !(c.k.is_finite() && c.k > 0.0) {
        r.push(
            ViolationCode::InvalidCoefficient,
            "coefficient.k",
            format!("k must be positive and finite, got {}", c.k),
        );
        return;
    }
    match c.source {
        CoefficientSource::RandomSampleDefault if c.k != 1.0 => r.push(
            ViolationCode::CoefficientSourceMismatch,
            "coefficient.k",
            format!("random-sample default requires k = 1, got {}", c.k),
        ),
        CoefficientSource::VolunteerDefault => {
            let (lo, hi) = ExtrapolationCoefficient::VOLUNTEER_BAND;
            if !(lo..=hi).contains(&c.k) {
                r.push(
                    ViolationCode::CoefficientSourceMismatch,
                    "coefficient.k",
                    format!("volunteer default must lie in [{lo}, {hi}], got {}", c.k),
                );
            }
        }
        _ => {}
    }
    if sampling == Some(Sampling::Unknown) && c.source != CoefficientSource::User {
        r.push(
            ViolationCode::DefaultCoefficientForUnknownSampling,
            "coefficient.source",
            "sampling scheme is unknown: supply k explicitly",
        );
    }
}

fn check_baseline(r: &mut ValidationReport, b: &BaselineModel) {
    r.footprint("baseline.base_value", b.base_value);
    match b.strategy {
        BaselineStrategy::Projection => {
            if let Err(e) = b.check() {
                r.push(ViolationCode::InvalidBaseline, "baseline", e.to_string());
            }
        }
        BaselineStrategy::FixedAtIntroduction | BaselineStrategy::FixedAtAssessment => {
            if b.growth != 0.0 || b.efficiency != 0.0 || b.cone.is_some() {
                r.push(
                    ViolationCode::InvalidBaseline,
                    "baseline",
                    "fixed baselines carry no growth, efficiency or cone",
                );
            }
            match (b.strategy, b.anchor) {
                (BaselineStrategy::FixedAtAssessment, None) => r.push(
                    ViolationCode::InvalidBaseline,
                    "baseline.anchor",
                    "fixed_at_assessment needs the anchor period",
                ),
                (BaselineStrategy::FixedAtAssessment, Some(a)) if a < b.t0 => r.push(
                    ViolationCode::InvalidBaseline,
                    "baseline.anchor",
                    format!("anchor {a} precedes service introduction {}", b.t0),
                ),
                _ => {}
            }
        }
    }
}
