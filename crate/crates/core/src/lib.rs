//! Assessment of induced (enabling) effects of ICT services on the
//! footprint of the activities they modify.
//!
//! The crate is layered: [`domain`] holds validated inputs, [`engine`] the
//! effect formulas, [`baseline`] reference trajectories, [`uncertainty`]
//! interval and sensitivity methods, [`audit`] methodological checks, and
//! [`workbench`] ties them to versioned scenario files and reports.

pub mod audit;
pub mod baseline;
pub mod domain;
pub mod engine;
pub mod evaluate;
pub mod uncertainty;
pub mod workbench;

pub use domain::{AssessmentScenario, Co2e};
pub use workbench::{parse_scenario, run_assessment, ParseMode, RunOptions, ScenarioDocument};
