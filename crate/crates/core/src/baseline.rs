//! Baselines for the reference activity and the induced-effect trajectory
//! against a supplied with-service path.
//!
//! Projection baselines compound discretely per assessment period:
//! `base * (1 + g)^n * (1 - e)^n` with `n = t - t0`. A continuous-compounding
//! variant would fit behind the same functions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::Co2e;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("period {t} precedes the baseline anchor t0 = {t0}")]
    BeforeAnchor { t: i64, t0: i64 },
    #[error("efficiency rate must lie in [0, 1), got {0}")]
    EfficiencyOutOfRange(f64),
    #[error("growth rate must exceed -1, got {0}")]
    GrowthOutOfRange(f64),
    #[error("inverted cone bounds: {0}")]
    InvertedCone(String),
    #[error("with-service path has {got} periods, {needed} needed")]
    LengthMismatch { got: usize, needed: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineStrategy {
    /// Constant at the footprint when the service was introduced.
    FixedAtIntroduction,
    /// Constant at the footprint when the assessment is made.
    FixedAtAssessment,
    /// Projected with growth and efficiency improvement.
    Projection,
}

impl BaselineStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineStrategy::FixedAtIntroduction => "fixed_at_introduction",
            BaselineStrategy::FixedAtAssessment => "fixed_at_assessment",
            BaselineStrategy::Projection => "projection",
        }
    }
}

/// Uncertainty cone of a projection baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub g_lo: f64,
    pub g_hi: f64,
    pub e_lo: f64,
    pub e_hi: f64,
}

impl Cone {
    pub fn degenerate(g: f64, e: f64) -> Self {
        Cone {
            g_lo: g,
            g_hi: g,
            e_lo: e,
            e_hi: e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub strategy: BaselineStrategy,
    pub base_value: Co2e,
    /// Period index of the service introduction.
    pub t0: i64,
    /// Period at which a `fixed_at_assessment` baseline was read.
    #[serde(default)]
    pub anchor: Option<i64>,
    #[serde(default)]
    pub growth: f64,
    #[serde(default)]
    pub efficiency: f64,
    /// Defaults to a cone collapsed onto the central parameters.
    #[serde(default)]
    pub cone: Option<Cone>,
}

impl BaselineModel {
    pub fn fixed_at_introduction(base_value: Co2e, t0: i64) -> Self {
        BaselineModel {
            strategy: BaselineStrategy::FixedAtIntroduction,
            base_value,
            t0,
            anchor: None,
            growth: 0.0,
            efficiency: 0.0,
            cone: None,
        }
    }

    pub fn fixed_at_assessment(base_value: Co2e, t0: i64, anchor: i64) -> Self {
        BaselineModel {
            strategy: BaselineStrategy::FixedAtAssessment,
            anchor: Some(anchor),
            ..Self::fixed_at_introduction(base_value, t0)
        }
    }

    pub fn projection(base_value: Co2e, t0: i64, growth: f64, efficiency: f64) -> Self {
        BaselineModel {
            strategy: BaselineStrategy::Projection,
            base_value,
            t0,
            anchor: None,
            growth,
            efficiency,
            cone: None,
        }
    }

    pub fn with_cone(mut self, cone: Cone) -> Self {
        self.cone = Some(cone);
        self
    }

    pub fn effective_cone(&self) -> Cone {
        self.cone
            .unwrap_or_else(|| Cone::degenerate(self.growth, self.efficiency))
    }

    /// Checks rate ranges and that the cone brackets the central parameters.
    pub fn check(&self) -> Result<(), BaselineError> {
        check_rates(self.growth, self.efficiency)?;
        let c = self.effective_cone();
        check_rates(c.g_lo, c.e_lo)?;
        check_rates(c.g_hi, c.e_hi)?;
        if !(c.g_lo <= self.growth && self.growth <= c.g_hi) {
            return Err(BaselineError::InvertedCone(format!(
                "growth {} outside [{}, {}]",
                self.growth, c.g_lo, c.g_hi
            )));
        }
        if !(c.e_lo <= self.efficiency && self.efficiency <= c.e_hi) {
            return Err(BaselineError::InvertedCone(format!(
                "efficiency {} outside [{}, {}]",
                self.efficiency, c.e_lo, c.e_hi
            )));
        }
        Ok(())
    }
}

fn check_rates(g: f64, e: f64) -> Result<(), BaselineError> {
    if !(e.is_finite() && (0.0..1.0).contains(&e)) {
        return Err(BaselineError::EfficiencyOutOfRange(e));
    }
    if !(g.is_finite() && g > -1.0) {
        return Err(BaselineError::GrowthOutOfRange(g));
    }
    Ok(())
}

fn project(base: Co2e, g: f64, e: f64, elapsed: i64) -> Co2e {
    let n = elapsed as i32;
    base * ((1.0 + g).powi(n) * (1.0 - e).powi(n))
}

fn elapsed(model: &BaselineModel, t: i64) -> Result<i64, BaselineError> {
    if t < model.t0 {
        return Err(BaselineError::BeforeAnchor { t, t0: model.t0 });
    }
    Ok(t - model.t0)
}

/// Baseline footprint of the reference activity in period `t`.
pub fn baseline_value(model: &BaselineModel, t: i64) -> Result<Co2e, BaselineError> {
    match model.strategy {
        BaselineStrategy::FixedAtIntroduction | BaselineStrategy::FixedAtAssessment => {
            Ok(model.base_value)
        }
        BaselineStrategy::Projection => {
            check_rates(model.growth, model.efficiency)?;
            let n = elapsed(model, t)?;
            Ok(project(model.base_value, model.growth, model.efficiency, n))
        }
    }
}

/// Lower and upper edge of the baseline cone in period `t`. The lower edge
/// pairs the slowest growth with the fastest efficiency gain.
pub fn baseline_cone(model: &BaselineModel, t: i64) -> Result<(Co2e, Co2e), BaselineError> {
    match model.strategy {
        BaselineStrategy::FixedAtIntroduction | BaselineStrategy::FixedAtAssessment => {
            Ok((model.base_value, model.base_value))
        }
        BaselineStrategy::Projection => {
            model.check()?;
            let n = elapsed(model, t)?;
            let c = model.effective_cone();
            Ok((
                project(model.base_value, c.g_lo, c.e_hi, n),
                project(model.base_value, c.g_hi, c.e_lo, n),
            ))
        }
    }
}

/// Footprint of the reference activity and the service once the service is
/// in place, one value per period starting at `t0`. Optional bounds express
/// how uncertain that path is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WithServicePath {
    pub central: Vec<Co2e>,
    #[serde(default)]
    pub lo: Option<Vec<Co2e>>,
    #[serde(default)]
    pub hi: Option<Vec<Co2e>>,
}

impl WithServicePath {
    pub fn new(central: Vec<Co2e>) -> Self {
        WithServicePath {
            central,
            lo: None,
            hi: None,
        }
    }

    pub fn len(&self) -> usize {
        self.central.len()
    }

    pub fn is_empty(&self) -> bool {
        self.central.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: i64,
    pub baseline: Co2e,
    pub baseline_lo: Co2e,
    pub baseline_hi: Co2e,
    pub with_service: Co2e,
    pub effect: Co2e,
    pub effect_lo: Co2e,
    pub effect_hi: Co2e,
}

/// Per-period induced effect `baseline(t) - with_service(t)` from `t0` on,
/// together with the range spanned by both cones.
pub fn effect_trajectory(
    model: &BaselineModel,
    with_service: &WithServicePath,
) -> Result<Vec<TrajectoryPoint>, BaselineError> {
    let n = with_service.len();
    for bound in [&with_service.lo, &with_service.hi].into_iter().flatten() {
        if bound.len() != n {
            return Err(BaselineError::LengthMismatch {
                got: bound.len(),
                needed: n,
            });
        }
    }
    (0..n)
        .map(|i| {
            let t = model.t0 + i as i64;
            let baseline = baseline_value(model, t)?;
            let (baseline_lo, baseline_hi) = baseline_cone(model, t)?;
            let ws = with_service.central[i];
            let ws_lo = with_service.lo.as_ref().map_or(ws, |v| v[i]);
            let ws_hi = with_service.hi.as_ref().map_or(ws, |v| v[i]);
            Ok(TrajectoryPoint {
                t,
                baseline,
                baseline_lo,
                baseline_hi,
                with_service: ws,
                effect: baseline - ws,
                effect_lo: baseline_lo - ws_hi,
                effect_hi: baseline_hi - ws_lo,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub t: i64,
    pub baseline: Co2e,
    pub lo: Co2e,
    pub hi: Co2e,
}

/// Baseline and cone for `horizon` periods starting at `t0`.
pub fn baseline_table(model: &BaselineModel, horizon: u32) -> Result<Vec<BaselineRow>, BaselineError> {
    (0..horizon as i64)
        .map(|i| {
            let t = model.t0 + i;
            let (lo, hi) = baseline_cone(model, t)?;
            Ok(BaselineRow {
                t,
                baseline: baseline_value(model, t)?,
                lo,
                hi,
            })
        })
        .collect()
}
