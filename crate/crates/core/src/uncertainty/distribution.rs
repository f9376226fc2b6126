use serde::{Deserialize, Serialize};

use super::UncertaintyError;
use crate::domain::{ParamPath, UncertaintyClass};

const WEIGHT_TOL: f64 = 1e-9;

/// Shape of a parameter distribution. Every shape is bounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Point { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Triangular { lo: f64, mode: f64, hi: f64 },
    Discrete { values: Vec<f64>, weights: Vec<f64> },
}

impl Shape {
    pub fn check(&self) -> Result<(), String> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Shape::Point { value } if !value.is_finite() => Err("non-finite point value".into()),
            Shape::Point { .. } => Ok(()),
            Shape::Uniform { lo, hi } => {
                if !finite(&[*lo, *hi]) {
                    Err("bounds must be finite".into())
                } else if lo > hi {
                    Err(format!("lo {lo} exceeds hi {hi}"))
                } else {
                    Ok(())
                }
            }
            Shape::Triangular { lo, mode, hi } => {
                if !finite(&[*lo, *mode, *hi]) {
                    Err("bounds must be finite".into())
                } else if !(lo <= mode && mode <= hi) {
                    Err(format!("need lo <= mode <= hi, got {lo}, {mode}, {hi}"))
                } else {
                    Ok(())
                }
            }
            Shape::Discrete { values, weights } => {
                if values.is_empty() || values.len() != weights.len() {
                    return Err("values and weights must be non-empty and of equal length".into());
                }
                if !finite(values) || !finite(weights) || weights.iter().any(|w| *w < 0.0) {
                    return Err("values must be finite and weights non-negative".into());
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_TOL {
                    return Err(format!("weights sum to {total}, not 1"));
                }
                Ok(())
            }
        }
    }

    /// Smallest and largest value the shape can produce.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Shape::Point { value } => (*value, *value),
            Shape::Uniform { lo, hi } | Shape::Triangular { lo, hi, .. } => (*lo, *hi),
            Shape::Discrete { values, .. } => (
                values.iter().copied().fold(f64::INFINITY, f64::min),
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
        }
    }

    /// Inverse CDF at `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            Shape::Point { value } => *value,
            Shape::Uniform { lo, hi } => lo + u * (hi - lo),
            Shape::Triangular { lo, mode, hi } => {
                let width = hi - lo;
                if width == 0.0 {
                    return *lo;
                }
                let split = (mode - lo) / width;
                if u < split {
                    lo + (u * width * (mode - lo)).sqrt()
                } else {
                    hi - ((1.0 - u) * width * (hi - mode)).sqrt()
                }
            }
            Shape::Discrete { values, weights } => {
                let mut cumulative = 0.0;
                for (v, w) in values.iter().zip(weights) {
                    cumulative += w;
                    if u < cumulative {
                        return *v;
                    }
                }
                // rounding left the cumulative sum a hair below 1
                *values.last().expect("checked non-empty")
            }
        }
    }
}

/// Distribution of one scenario parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterDistribution {
    pub target: ParamPath,
    pub shape: Shape,
    /// Overrides the class tagged in the scenario's time perspective.
    #[serde(default)]
    pub uncertainty_class: Option<UncertaintyClass>,
}

impl ParameterDistribution {
    pub fn new(target: ParamPath, shape: Shape) -> Self {
        ParameterDistribution {
            target,
            shape,
            uncertainty_class: None,
        }
    }

    pub fn check(&self) -> Result<(), UncertaintyError> {
        self.shape
            .check()
            .map_err(|reason| UncertaintyError::InvalidDistribution {
                target: self.target,
                reason,
            })
    }
}
