use crate::domain::Co2e;
use crate::engine::EngineError;

/// Extrapolation coefficient that maps a case-study average onto an observed
/// population average: `k = population / case_study`.
pub fn calibrate_k(case_study_avg: Co2e, population_avg: Co2e) -> Result<f64, EngineError> {
    let (cs, pop) = (case_study_avg.as_kg(), population_avg.as_kg());
    if !cs.is_finite() || !pop.is_finite() {
        return Err(EngineError::NonFinite {
            name: "average",
            value: if cs.is_finite() { pop } else { cs },
        });
    }
    if cs == 0.0 {
        return Err(EngineError::ZeroCaseStudyAverage);
    }
    let k = pop / cs;
    if k <= 0.0 {
        return Err(EngineError::InvalidCoefficient(k));
    }
    Ok(k)
}
