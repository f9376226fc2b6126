//! Induced-effect arithmetic for substitution and optimization services.
//!
//! Every function is pure. Effects are never clamped: a service whose own
//! footprint outweighs what it saves yields a negative effect.
//!
//! Usage counts are taken as `f64` so that sampled or share-derived counts
//! flow through the same code path as observed integer counts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{CaseStudy, Co2e, ExtrapolationCoefficient, InstanceFootprint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("footprint `{name}` must be a non-negative finite quantity, got {value}")]
    InvalidFootprint { name: &'static str, value: f64 },
    #[error("usage count `{name}` must be a non-negative finite number, got {value}")]
    InvalidCount { name: &'static str, value: f64 },
    #[error("extrapolation coefficient must be positive and finite, got {0}")]
    InvalidCoefficient(f64),
    #[error("no modified instances")]
    EmptyCaseStudy,
    #[error("rebound reference footprint {rebound} exceeds the total {total}")]
    ReboundExceedsTotal { rebound: f64, total: f64 },
    #[error("case-study average must be non-zero to calibrate")]
    ZeroCaseStudyAverage,
    #[error("value `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, EngineError>;

pub(crate) fn footprint(name: &'static str, fp: Co2e) -> Result<Co2e> {
    let v = fp.as_kg();
    if v.is_finite() && v >= 0.0 {
        Ok(fp)
    } else {
        Err(EngineError::InvalidFootprint { name, value: v })
    }
}

pub(crate) fn count(name: &'static str, n: f64) -> Result<f64> {
    if n.is_finite() && n >= 0.0 {
        Ok(n)
    } else {
        Err(EngineError::InvalidCount { name, value: n })
    }
}

pub(crate) fn finite(name: &'static str, q: Co2e) -> Result<Co2e> {
    if q.is_finite() {
        Ok(q)
    } else {
        Err(EngineError::NonFinite {
            name,
            value: q.as_kg(),
        })
    }
}

fn coefficient(coeff: &ExtrapolationCoefficient) -> Result<f64> {
    if coeff.k.is_finite() && coeff.k > 0.0 {
        Ok(coeff.k)
    } else {
        Err(EngineError::InvalidCoefficient(coeff.k))
    }
}

/// Whole-activity substitution: reference footprint minus service footprint.
pub fn induced_effect_basic(fp_a: Co2e, fp_s: Co2e) -> Result<Co2e> {
    Ok(footprint("fp_a", fp_a)? - footprint("fp_s", fp_s)?)
}

/// Effect over a partition into modified (M) and non-modified (N) usages.
///
/// The non-modified footprint appears on both sides and cancels; it is
/// validated but does not enter the result.
pub fn induced_effect_partition(
    fp_a_m: Co2e,
    fp_a_n: Co2e,
    fp_a_opt_m: Co2e,
    fp_s_m: Co2e,
) -> Result<Co2e> {
    footprint("fp_a_n", fp_a_n)?;
    Ok(footprint("fp_a_m", fp_a_m)?
        - (footprint("fp_a_opt_m", fp_a_opt_m)? + footprint("fp_s_m", fp_s_m)?))
}

/// Effect of one modified usage.
pub fn per_usage_effect(inst: &InstanceFootprint) -> Co2e {
    inst.fp_a - (inst.fp_a_opt + inst.fp_s)
}

fn require_modified(cs: &CaseStudy) -> Result<()> {
    if cs.modified.is_empty() {
        Err(EngineError::EmptyCaseStudy)
    } else {
        Ok(())
    }
}

/// Sum of the per-usage effects of the case study's modified instances.
/// Rebound instances are ignored here.
pub fn case_study_effect(cs: &CaseStudy) -> Result<Co2e> {
    require_modified(cs)?;
    Ok(cs.modified.iter().map(per_usage_effect).sum())
}

/// Average per-usage effect of the case study.
pub fn case_study_average(cs: &CaseStudy) -> Result<Co2e> {
    Ok(case_study_effect(cs)? / cs.modified.len() as f64)
}

/// Modelled per-usage effect scaled to `m_count` usages.
pub fn model_based_effect(e_mod: Co2e, m_count: f64) -> Result<Co2e> {
    Ok(finite("model_average", e_mod)? * count("m_count", m_count)?)
}

/// Scales an average per-usage effect to `m_target` usages with the
/// extrapolation coefficient `k`.
pub fn extrapolate(e_avg: Co2e, m_target: f64, coeff: &ExtrapolationCoefficient) -> Result<Co2e> {
    let k = coefficient(coeff)?;
    Ok(finite("e_avg", e_avg)? * k * count("m_target", m_target)?)
}

/// Effect with rebound usages (R) charged to the service side.
///
/// `fp_a_opt_mr` and `fp_s_mr` run over M and R together. A substitution is
/// the case `fp_a_opt_mr = 0`.
pub fn effect_with_rebound(fp_a_m: Co2e, fp_a_opt_mr: Co2e, fp_s_mr: Co2e) -> Result<Co2e> {
    Ok(footprint("fp_a_m", fp_a_m)?
        - (footprint("fp_a_opt_mr", fp_a_opt_mr)? + footprint("fp_s_mr", fp_s_mr)?))
}

/// Substitution with rebound: the optimized remainder is zero.
pub fn substitution_effect_with_rebound(fp_a_m: Co2e, fp_s_mr: Co2e) -> Result<Co2e> {
    effect_with_rebound(fp_a_m, Co2e::ZERO, fp_s_mr)
}

/// A naive assessment next to the rebound-corrected one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReboundDecomposition {
    /// Effect when every service usage is treated as a modification.
    pub naive: Co2e,
    /// Effect with rebound usages excluded from the reference side.
    pub correct: Co2e,
    /// `naive - correct`, which is the reference footprint wrongly credited
    /// to rebound usages.
    pub overstatement: Co2e,
}

/// Compares the naive assessment, which credits a counterfactual reference
/// activity to every service usage, with the corrected one.
///
/// `fp_a_mr` is the reference footprint the naive assessment assumes over
/// M and R, of which `fp_a_r` belongs to rebound usages.
pub fn naive_effect_and_overstatement(
    fp_a_mr: Co2e,
    fp_a_r: Co2e,
    fp_a_opt_mr: Co2e,
    fp_s_mr: Co2e,
) -> Result<ReboundDecomposition> {
    let fp_a_mr = footprint("fp_a_mr", fp_a_mr)?;
    let fp_a_r = footprint("fp_a_r", fp_a_r)?;
    if fp_a_r > fp_a_mr {
        return Err(EngineError::ReboundExceedsTotal {
            rebound: fp_a_r.as_kg(),
            total: fp_a_mr.as_kg(),
        });
    }
    let service_side =
        footprint("fp_a_opt_mr", fp_a_opt_mr)? + footprint("fp_s_mr", fp_s_mr)?;
    Ok(ReboundDecomposition {
        naive: fp_a_mr - service_side,
        correct: (fp_a_mr - fp_a_r) - service_side,
        overstatement: fp_a_r,
    })
}

/// Case-study effect with the footprint of rebound instances subtracted.
pub fn case_study_effect_with_rebound(cs: &CaseStudy) -> Result<Co2e> {
    require_modified(cs)?;
    let reference: Co2e = cs.modified.iter().map(|i| i.fp_a).sum();
    let modified_side: Co2e = cs.modified.iter().map(|i| i.fp_s + i.fp_a_opt).sum();
    let rebound_side: Co2e = cs.rebound.iter().map(|r| r.fp_s + r.fp_a_opt).sum();
    Ok(reference - (modified_side + rebound_side))
}

/// Rebound-corrected case-study average scaled to `m_target` usages with `k`.
pub fn full_pipeline(cs: &CaseStudy, m_target: f64, coeff: &ExtrapolationCoefficient) -> Result<Co2e> {
    let k = coefficient(coeff)?;
    let m_target = count("m_target", m_target)?;
    let effect = case_study_effect_with_rebound(cs)?;
    Ok(effect * k * m_target / cs.modified.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{approx_eq, ReboundInstance};

    fn kg(v: f64) -> Co2e {
        Co2e::kg(v)
    }

    fn study(rows: &[(f64, f64, f64)]) -> CaseStudy {
        CaseStudy::new(
            rows.iter()
                .enumerate()
                .map(|(i, &(a, o, s))| InstanceFootprint::new(format!("m{i}"), a, o, s))
                .collect(),
        )
    }

    #[test]
    fn basic_effect_either_sign() {
        assert_eq!(induced_effect_basic(kg(100.0), kg(30.0)), Ok(kg(70.0)));
        assert_eq!(induced_effect_basic(kg(50.0), kg(50.0)), Ok(kg(0.0)));
        assert_eq!(induced_effect_basic(kg(30.0), kg(100.0)), Ok(kg(-70.0)));
        assert!(matches!(
            induced_effect_basic(kg(-1.0), kg(0.0)),
            Err(EngineError::InvalidFootprint { name: "fp_a", .. })
        ));
    }

    #[test]
    fn partition_effect() {
        let z = kg(0.0);
        assert_eq!(induced_effect_partition(kg(100.0), z, z, kg(30.0)), Ok(kg(70.0)));
        assert_eq!(induced_effect_partition(kg(100.0), z, kg(40.0), kg(30.0)), Ok(kg(30.0)));
        assert_eq!(
            induced_effect_partition(kg(100.0), kg(500.0), kg(40.0), kg(30.0)),
            Ok(kg(30.0))
        );
        assert!(induced_effect_partition(kg(100.0), kg(-5.0), z, z).is_err());
    }

    #[test]
    fn per_usage() {
        assert_eq!(per_usage_effect(&InstanceFootprint::new("a", 10.0, 4.0, 1.0)), kg(5.0));
        assert_eq!(per_usage_effect(&InstanceFootprint::new("a", 10.0, 0.0, 1.0)), kg(9.0));
        assert_eq!(per_usage_effect(&InstanceFootprint::new("a", 10.0, 9.0, 1.0)), kg(0.0));
    }

    #[test]
    fn case_study_sum_and_average() {
        let cs = study(&[(10.0, 0.0, 1.0), (8.0, 0.0, 2.0), (12.0, 0.0, 3.0)]);
        assert_eq!(case_study_effect(&cs), Ok(kg(24.0)));
        assert_eq!(case_study_average(&cs), Ok(kg(8.0)));

        let single = study(&[(10.0, 4.0, 1.0)]);
        assert_eq!(case_study_effect(&single), Ok(kg(5.0)));
        assert_eq!(case_study_average(&single), Ok(kg(5.0)));

        let empty = study(&[]);
        assert_eq!(case_study_average(&empty), Err(EngineError::EmptyCaseStudy));
        assert_eq!(EngineError::EmptyCaseStudy.to_string(), "no modified instances");
    }

    #[test]
    fn model_effect() {
        assert_eq!(model_based_effect(kg(0.5), 1000.0), Ok(kg(500.0)));
        assert_eq!(model_based_effect(kg(-3.2), 0.0), Ok(kg(-0.0)));
        assert!(model_based_effect(kg(0.5), -1.0).is_err());

        let uniform = study(&vec![(0.75, 0.0, 0.25); 1000]);
        let oracle: f64 = (0..1000).map(|_| 0.5).sum();
        assert!(approx_eq(case_study_effect(&uniform).unwrap().as_kg(), oracle));
        assert!(approx_eq(
            model_based_effect(kg(0.5), 1000.0).unwrap().as_kg(),
            case_study_effect(&uniform).unwrap().as_kg()
        ));
    }

    #[test]
    fn extrapolation() {
        let e = extrapolate(kg(8.0), 1e6, &ExtrapolationCoefficient::user(0.15)).unwrap();
        assert!(approx_eq(e.as_kg(), 1.2e6));
        let e1 = extrapolate(kg(8.0), 1e6, &ExtrapolationCoefficient::random_sample()).unwrap();
        assert_eq!(e1, kg(8e6));
        assert_eq!(
            extrapolate(kg(8.0), 1.0, &ExtrapolationCoefficient::user(0.0)),
            Err(EngineError::InvalidCoefficient(0.0))
        );
        assert!(extrapolate(kg(8.0), 1.0, &ExtrapolationCoefficient::user(-0.5)).is_err());
    }

    #[test]
    fn rebound_effect() {
        let z = kg(0.0);
        assert_eq!(effect_with_rebound(kg(100.0), z, kg(50.0)), Ok(kg(50.0)));
        assert_eq!(substitution_effect_with_rebound(kg(100.0), kg(50.0)), Ok(kg(50.0)));
        assert_eq!(effect_with_rebound(kg(100.0), kg(30.0), kg(20.0)), Ok(kg(50.0)));
        // no rebound usages: same numbers as the plain partition effect
        assert_eq!(
            effect_with_rebound(kg(100.0), kg(40.0), kg(30.0)),
            induced_effect_partition(kg(100.0), kg(7.0), kg(40.0), kg(30.0))
        );
    }

    #[test]
    fn overstatement_identity() {
        let d = naive_effect_and_overstatement(kg(140.0), kg(40.0), kg(0.0), kg(50.0)).unwrap();
        assert_eq!(d.naive, kg(90.0));
        assert_eq!(d.correct, kg(50.0));
        assert_eq!(d.overstatement, kg(40.0));

        let d = naive_effect_and_overstatement(kg(140.0), kg(0.0), kg(3.0), kg(50.0)).unwrap();
        assert_eq!(d.overstatement, kg(0.0));
        assert_eq!(d.naive, d.correct);

        assert!(matches!(
            naive_effect_and_overstatement(kg(10.0), kg(11.0), kg(0.0), kg(0.0)),
            Err(EngineError::ReboundExceedsTotal { .. })
        ));
    }

    #[test]
    fn overstatement_is_linear_in_rebound_share() {
        // total observed usages fixed, per-usage reference footprint fixed
        let usages = 10_000.0;
        let per_usage_a = 2.5;
        let service = kg(1_000.0);
        let shares = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999];
        let over: Vec<f64> = shares
            .iter()
            .map(|rho| {
                let fp_a_mr = kg(usages * per_usage_a);
                let fp_a_r = kg(rho * usages * per_usage_a);
                naive_effect_and_overstatement(fp_a_mr, fp_a_r, kg(0.0), service)
                    .unwrap()
                    .overstatement
                    .as_kg()
            })
            .collect();
        for (rho, o) in shares.iter().zip(&over) {
            assert!(approx_eq(*o, rho * usages * per_usage_a));
        }
        let slope = (over[6] - over[0]) / (shares[6] - shares[0]);
        for i in 1..shares.len() {
            let predicted = over[0] + slope * (shares[i] - shares[0]);
            assert!(approx_eq(over[i], predicted));
        }
    }

    #[test]
    fn case_study_with_rebound() {
        let cs = study(&[(10.0, 0.0, 1.0); 3]).with_rebound(vec![
            ReboundInstance::new("r0", 0.0, 1.0),
            ReboundInstance::new("r1", 0.0, 1.0),
        ]);
        assert_eq!(case_study_effect_with_rebound(&cs), Ok(kg(25.0)));

        let plain = study(&[(10.0, 0.0, 1.0), (8.0, 2.0, 2.0)]);
        assert_eq!(case_study_effect_with_rebound(&plain), case_study_effect(&plain));
        assert!(case_study_effect_with_rebound(&study(&[])).is_err());
    }

    #[test]
    fn pipeline() {
        let cs = study(&[(10.0, 0.0, 1.0); 3]).with_rebound(vec![
            ReboundInstance::new("r0", 0.0, 1.0),
            ReboundInstance::new("r1", 0.0, 1.0),
        ]);
        let e = full_pipeline(&cs, 300.0, &ExtrapolationCoefficient::random_sample()).unwrap();
        assert!(approx_eq(e.as_kg(), 2500.0));
        let e = full_pipeline(&cs, 300.0, &ExtrapolationCoefficient::user(0.15)).unwrap();
        assert!(approx_eq(e.as_kg(), 375.0));

        let no_rebound = study(&[(10.0, 0.0, 1.0), (8.0, 2.0, 2.0), (5.0, 0.0, 6.0)]);
        let k1 = ExtrapolationCoefficient::random_sample();
        let composed = extrapolate(case_study_average(&no_rebound).unwrap(), 120.0, &k1).unwrap();
        assert!(approx_eq(
            full_pipeline(&no_rebound, 120.0, &k1).unwrap().as_kg(),
            composed.as_kg()
        ));
    }
}
