use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::quantity::{AssessmentPeriod, Co2e, MassUnit};
use crate::baseline::{BaselineModel, WithServicePath};
use crate::uncertainty::ParameterDistribution;

/// How the service changes the reference activity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// The reference activity disappears for modified usages.
    Substitution,
    /// A residual, optimized reference activity remains.
    Optimization,
}

/// Point in time an assessment refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Perspective {
    /// Case study.
    #[serde(rename = "CS")]
    CaseStudy,
    /// Present.
    #[serde(rename = "P")]
    Present,
    /// Present potential, i.e. maximum uptake under today's conditions.
    #[serde(rename = "PP")]
    PresentPotential,
    /// Future potential.
    #[serde(rename = "F")]
    Future,
}

impl Perspective {
    pub fn is_forward_looking(self) -> bool {
        matches!(self, Perspective::PresentPotential | Perspective::Future)
    }

    pub fn code(self) -> &'static str {
        match self {
            Perspective::CaseStudy => "CS",
            Perspective::Present => "P",
            Perspective::PresentPotential => "PP",
            Perspective::Future => "F",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertaintyClass {
    /// Incomplete knowledge about a state that exists.
    DataUncertainty,
    /// The state itself has not happened yet.
    FutureUncertainty,
}

/// Scenario parameters that can be varied in sensitivity and Monte Carlo runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParamPath {
    #[serde(rename = "coefficient.k")]
    CoefficientK,
    #[serde(rename = "partition.m_count")]
    MCount,
    #[serde(rename = "partition.r_count")]
    RCount,
    #[serde(rename = "rebound_share")]
    ReboundShare,
    #[serde(rename = "model_average")]
    ModelAverage,
    #[serde(rename = "baseline.growth")]
    BaselineGrowth,
    #[serde(rename = "baseline.efficiency")]
    BaselineEfficiency,
}

impl ParamPath {
    pub const ALL: [ParamPath; 7] = [
        ParamPath::CoefficientK,
        ParamPath::MCount,
        ParamPath::RCount,
        ParamPath::ReboundShare,
        ParamPath::ModelAverage,
        ParamPath::BaselineGrowth,
        ParamPath::BaselineEfficiency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamPath::CoefficientK => "coefficient.k",
            ParamPath::MCount => "partition.m_count",
            ParamPath::RCount => "partition.r_count",
            ParamPath::ReboundShare => "rebound_share",
            ParamPath::ModelAverage => "model_average",
            ParamPath::BaselineGrowth => "baseline.growth",
            ParamPath::BaselineEfficiency => "baseline.efficiency",
        }
    }

    /// Population-size parameters, which forward-looking perspectives must
    /// tag with an uncertainty class.
    pub fn is_population_size(self) -> bool {
        matches!(self, ParamPath::MCount | ParamPath::RCount)
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimePerspective {
    pub kind: Perspective,
    /// Uncertainty class per parameter. Untagged parameters default to data
    /// uncertainty.
    #[serde(default)]
    pub uncertainty: BTreeMap<ParamPath, UncertaintyClass>,
}

impl TimePerspective {
    pub fn new(kind: Perspective) -> Self {
        TimePerspective {
            kind,
            uncertainty: BTreeMap::new(),
        }
    }

    pub fn class_of(&self, param: ParamPath) -> UncertaintyClass {
        self.uncertainty
            .get(&param)
            .copied()
            .unwrap_or(UncertaintyClass::DataUncertainty)
    }
}

/// Footprints of one modified usage: the reference activity it replaced, the
/// optimized remainder (zero for substitutions) and the service itself.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFootprint {
    pub id: String,
    pub fp_a: Co2e,
    pub fp_a_opt: Co2e,
    pub fp_s: Co2e,
}

impl InstanceFootprint {
    pub fn new(id: impl Into<String>, fp_a: f64, fp_a_opt: f64, fp_s: f64) -> Self {
        InstanceFootprint {
            id: id.into(),
            fp_a: Co2e::kg(fp_a),
            fp_a_opt: Co2e::kg(fp_a_opt),
            fp_s: Co2e::kg(fp_s),
        }
    }
}

/// A rebound usage. It has no counterfactual reference activity, so there is
/// no `fp_a` field at all.
#[derive(Clone, Debug, PartialEq)]
pub struct ReboundInstance {
    pub id: String,
    pub fp_a_opt: Co2e,
    pub fp_s: Co2e,
}

impl ReboundInstance {
    pub fn new(id: impl Into<String>, fp_a_opt: f64, fp_s: f64) -> Self {
        ReboundInstance {
            id: id.into(),
            fp_a_opt: Co2e::kg(fp_a_opt),
            fp_s: Co2e::kg(fp_s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Random,
    Volunteer,
    #[default]
    Unknown,
}

/// Stored totals of a case study, cross-checked against its instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyTotals {
    /// Reference-activity footprint over the modified instances.
    pub fp_a_m: Co2e,
    /// Optimized-activity footprint over modified and rebound instances.
    pub fp_a_opt_mr: Co2e,
    /// Service footprint over modified and rebound instances.
    pub fp_s_mr: Co2e,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CaseStudyFile", into = "CaseStudyFile")]
pub struct CaseStudy {
    pub modified: Vec<InstanceFootprint>,
    pub rebound: Vec<ReboundInstance>,
    pub sampling: Sampling,
    pub observation_note: Option<String>,
    pub totals: Option<CaseStudyTotals>,
}

impl CaseStudy {
    pub fn new(modified: Vec<InstanceFootprint>) -> Self {
        CaseStudy {
            modified,
            rebound: Vec::new(),
            sampling: Sampling::Unknown,
            observation_note: None,
            totals: None,
        }
    }

    pub fn with_rebound(mut self, rebound: Vec<ReboundInstance>) -> Self {
        self.rebound = rebound;
        self
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }
}

/// File form of a case study: instance footprints are plain numbers in the
/// study's `unit`.
#[derive(Clone, Serialize, Deserialize)]
struct CaseStudyFile {
    #[serde(default)]
    unit: MassUnit,
    modified: Vec<InstanceFile>,
    #[serde(default)]
    rebound: Vec<ReboundFile>,
    #[serde(default)]
    sampling: Sampling,
    #[serde(default)]
    observation_note: Option<String>,
    #[serde(default)]
    totals: Option<CaseStudyTotals>,
}

#[derive(Clone, Serialize, Deserialize)]
struct InstanceFile {
    id: String,
    fp_a: f64,
    #[serde(default)]
    fp_a_opt: f64,
    fp_s: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct ReboundFile {
    id: String,
    #[serde(default)]
    fp_a_opt: f64,
    fp_s: f64,
}

impl TryFrom<CaseStudyFile> for CaseStudy {
    type Error = String;

    fn try_from(file: CaseStudyFile) -> Result<Self, Self::Error> {
        let unit = file.unit;
        Ok(CaseStudy {
            modified: file
                .modified
                .into_iter()
                .map(|i| InstanceFootprint {
                    id: i.id,
                    fp_a: Co2e::in_unit(i.fp_a, unit),
                    fp_a_opt: Co2e::in_unit(i.fp_a_opt, unit),
                    fp_s: Co2e::in_unit(i.fp_s, unit),
                })
                .collect(),
            rebound: file
                .rebound
                .into_iter()
                .map(|r| ReboundInstance {
                    id: r.id,
                    fp_a_opt: Co2e::in_unit(r.fp_a_opt, unit),
                    fp_s: Co2e::in_unit(r.fp_s, unit),
                })
                .collect(),
            sampling: file.sampling,
            observation_note: file.observation_note,
            totals: file.totals,
        })
    }
}

impl From<CaseStudy> for CaseStudyFile {
    fn from(cs: CaseStudy) -> Self {
        CaseStudyFile {
            unit: MassUnit::Kilograms,
            modified: cs
                .modified
                .into_iter()
                .map(|i| InstanceFile {
                    id: i.id,
                    fp_a: i.fp_a.as_kg(),
                    fp_a_opt: i.fp_a_opt.as_kg(),
                    fp_s: i.fp_s.as_kg(),
                })
                .collect(),
            rebound: cs
                .rebound
                .into_iter()
                .map(|r| ReboundFile {
                    id: r.id,
                    fp_a_opt: r.fp_a_opt.as_kg(),
                    fp_s: r.fp_s.as_kg(),
                })
                .collect(),
            sampling: cs.sampling,
            observation_note: cs.observation_note,
            totals: cs.totals,
        }
    }
}

/// Population-level aggregate footprints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionAggregates {
    /// Reference activity over the modified usages.
    pub fp_a_m: Co2e,
    /// Reference activity over the non-modified usages. Cancels out of every
    /// effect; kept for completeness checks.
    #[serde(default)]
    pub fp_a_n: Co2e,
    /// Counterfactual reference activity attributed to rebound usages by a
    /// naive assessment. Required for the overstatement.
    #[serde(default)]
    pub fp_a_r: Option<Co2e>,
    /// Optimized reference activity over modified and rebound usages.
    #[serde(default)]
    pub fp_a_opt_mr: Co2e,
    /// Service over modified and rebound usages.
    pub fp_s_mr: Co2e,
}

/// Cardinalities of the modified, non-modified and rebound usage sets.
///
/// Counts are signed so that negative values survive parsing and can be
/// reported by validation rather than failing deserialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UsagePartition {
    pub m_count: i64,
    #[serde(default)]
    pub n_count: i64,
    pub r_count: i64,
    #[serde(default)]
    pub aggregates: Option<PartitionAggregates>,
}

impl UsagePartition {
    pub fn new(m_count: i64, n_count: i64, r_count: i64) -> Self {
        UsagePartition {
            m_count,
            n_count,
            r_count,
            aggregates: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    User,
    VolunteerDefault,
    RandomSampleDefault,
}

/// Multiplier applied when scaling a case-study average to a population.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationCoefficient {
    pub k: f64,
    pub source: CoefficientSource,
}

impl ExtrapolationCoefficient {
    /// Midpoint of the conservative band recommended for volunteer samples.
    pub const VOLUNTEER_DEFAULT_K: f64 = 0.15;
    pub const VOLUNTEER_BAND: (f64, f64) = (0.1, 0.2);

    pub fn user(k: f64) -> Self {
        ExtrapolationCoefficient {
            k,
            source: CoefficientSource::User,
        }
    }

    pub fn volunteer_default() -> Self {
        ExtrapolationCoefficient {
            k: Self::VOLUNTEER_DEFAULT_K,
            source: CoefficientSource::VolunteerDefault,
        }
    }

    pub fn random_sample() -> Self {
        ExtrapolationCoefficient {
            k: 1.0,
            source: CoefficientSource::RandomSampleDefault,
        }
    }
}

/// Which input the headline effect is computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationPath {
    /// Case-study average extrapolated to the population, rebound included.
    CaseStudy,
    /// Modelled per-usage effect times the number of usages.
    Model,
    /// Population aggregates of the usage partition.
    Aggregate,
}

impl EstimationPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimationPath::CaseStudy => "case_study",
            EstimationPath::Model => "model",
            EstimationPath::Aggregate => "aggregate",
        }
    }
}

/// What the number of modified usages was derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UsageBasis {
    /// Total observed service usage (or a fixed share of it).
    TotalServiceUsage,
    /// Usages validated as modifications of the reference activity.
    ValidatedModified,
    #[default]
    Unknown,
}

/// A modified-usage share carried over from an earlier assessment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReusedShare {
    pub share: f64,
    pub source_label: String,
    /// Number of modified usages in the assessment the share comes from.
    pub source_m_count: i64,
}

/// Evidence behind the usage partition, inspected by the audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Evidence {
    #[serde(default)]
    pub m_count_basis: UsageBasis,
    /// Presence (not content) downgrades a missing-rebound finding.
    #[serde(default)]
    pub zero_rebound_justification: Option<String>,
    #[serde(default)]
    pub usage_intensity_sole_basis: bool,
    #[serde(default)]
    pub reused_share: Option<ReusedShare>,
    /// The service is regarded as part of mainstream, established technology.
    #[serde(default)]
    pub mainstream: bool,
}

/// Everything needed to assess one service against one reference activity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssessmentScenario {
    pub service_id: String,
    pub activity_id: String,
    pub mechanism: Mechanism,
    pub period: AssessmentPeriod,
    pub perspective: TimePerspective,
    pub estimation: EstimationPath,
    #[serde(default)]
    pub case_study: Option<CaseStudy>,
    /// Modelled per-usage effect.
    #[serde(default)]
    pub model_average: Option<Co2e>,
    pub partition: UsagePartition,
    /// Fraction of observed service usage (modified plus rebound) that is
    /// rebound. When set it overrides the modified/rebound split.
    #[serde(default)]
    pub rebound_share: Option<f64>,
    pub coefficient: ExtrapolationCoefficient,
    pub baseline: BaselineModel,
    #[serde(default)]
    pub with_service: Option<WithServicePath>,
    #[serde(default)]
    pub evidence: Evidence,
    #[serde(default)]
    pub distributions: Vec<ParameterDistribution>,
}

impl AssessmentScenario {
    /// Number of observed service usages, modified plus rebound.
    pub fn observed_usages(&self) -> i64 {
        self.partition.m_count + self.partition.r_count
    }

    pub fn has_rebound_data(&self) -> bool {
        self.partition.r_count > 0
            || self.rebound_share.is_some_and(|r| r > 0.0)
            || self.case_study.as_ref().is_some_and(|cs| !cs.rebound.is_empty())
            || self
                .partition
                .aggregates
                .as_ref()
                .and_then(|a| a.fp_a_r)
                .is_some_and(|r| r.as_kg() > 0.0)
    }
}
