//! File-level workflow: parse a scenario document, run it, and render the
//! report. The CLI, the HTTP service and the browser demo all go through
//! these functions so that their outputs agree byte for byte.

mod commands;
mod document;
mod report;

pub use commands::{
    run_audit, run_baseline, run_calibration, run_sensitivity, AuditReport, BaselineReport,
    CalibrationReport, SensitivityMode, SensitivityReport,
};
pub use document::{
    check_document, from_json_text, nest_issues, parse_scenario, serialize_document, to_canonical_json, Issue, IssueCode,
    Metadata, ParseMode, ScenarioDocument, WorkbenchError, SCHEMA_VERSION, SUPPORTED_VERSIONS,
};
pub use report::{
    input_digest, render_human, run_assessment, AssessmentReport, AssessmentResult,
    EffectInterval, IntervalMethod, Provenance, RunOptions, DEFAULT_HORIZON, REPORT_VERSION,
};

/// JSON Schema of scenario documents.
pub const SCENARIO_SCHEMA: &str = include_str!("../../schema/scenario.schema.json");
