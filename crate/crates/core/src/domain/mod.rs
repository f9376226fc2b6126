//! Validated data types shared by every other module.

mod quantity;
mod scenario;
mod validate;

pub use quantity::{
    approx_eq, approx_eq_scaled, AssessmentPeriod, Co2e, MassUnit, PeriodUnit, ABS_TOL, REL_TOL,
};
pub use scenario::{
    AssessmentScenario, CaseStudy, CaseStudyTotals, CoefficientSource, EstimationPath, Evidence,
    ExtrapolationCoefficient, InstanceFootprint, Mechanism, ParamPath, PartitionAggregates,
    Perspective, ReboundInstance, ReusedShare, Sampling, TimePerspective, UncertaintyClass,
    UsageBasis, UsagePartition,
};
pub use validate::{validate_scenario, ValidationReport, Violation, ViolationCode};
