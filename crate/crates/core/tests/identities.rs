//! Algebraic identities between the effect formulas, checked on random
//! non-negative inputs.

use ictimpact_core::domain::{
    approx_eq, approx_eq_scaled, CaseStudy, Co2e, ExtrapolationCoefficient, InstanceFootprint,
    ReboundInstance,
};
use ictimpact_core::engine::*;
use proptest::prelude::*;

const CASES: u32 = 10_000;

fn fp() -> impl Strategy<Value = f64> {
    0.0..1e6f64
}

fn kg(x: f64) -> Co2e {
    Co2e::kg(x)
}

fn case_study(max_n: usize, with_rebound: bool) -> impl Strategy<Value = CaseStudy> {
    let modified = prop::collection::vec((fp(), fp(), fp()), 1..max_n).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, o, s))| InstanceFootprint::new(format!("m{i}"), a, o, s))
            .collect::<Vec<_>>()
    });
    let rebound_len = if with_rebound { 0..max_n } else { 0..1 };
    let rebound = prop::collection::vec((fp(), fp()), rebound_len).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (o, s))| ReboundInstance::new(format!("r{i}"), o, s))
            .collect::<Vec<_>>()
    });
    (modified, rebound).prop_map(|(m, r)| CaseStudy::new(m).with_rebound(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn partition_reduces_to_substitution_without_optimized_remainder(
        a_m in fp(), a_n in fp(), s_m in fp()
    ) {
        let partition = induced_effect_partition(kg(a_m), kg(a_n), Co2e::ZERO, kg(s_m)).unwrap();
        let basic = induced_effect_basic(kg(a_m), kg(s_m)).unwrap();
        prop_assert_eq!(partition, basic);
    }

    #[test]
    fn partition_effect_ignores_non_modified_usages(
        a_m in fp(), n1 in fp(), n2 in fp(), o in fp(), s in fp()
    ) {
        let e1 = induced_effect_partition(kg(a_m), kg(n1), kg(o), kg(s)).unwrap();
        let e2 = induced_effect_partition(kg(a_m), kg(n2), kg(o), kg(s)).unwrap();
        prop_assert_eq!(e1, e2);
    }

    #[test]
    fn rebound_effect_reduces_to_partition_without_rebound(
        a_m in fp(), a_n in fp(), o in fp(), s in fp()
    ) {
        let with_rebound = effect_with_rebound(kg(a_m), kg(o), kg(s)).unwrap();
        let without_rebound = induced_effect_partition(kg(a_m), kg(a_n), kg(o), kg(s)).unwrap();
        prop_assert_eq!(with_rebound, without_rebound);
    }

    #[test]
    fn case_study_with_rebound_reduces_without_rebound_instances(cs in case_study(20, false)) {
        let with = case_study_effect_with_rebound(&cs).unwrap().as_kg();
        let plain = case_study_effect(&cs).unwrap().as_kg();
        let scale = cs.modified.iter().map(|i| i.fp_a.as_kg() + i.fp_a_opt.as_kg() + i.fp_s.as_kg()).sum::<f64>();
        prop_assert!(approx_eq_scaled(with, plain, scale), "{} vs {}", with, plain);
    }

    #[test]
    fn extrapolation_with_unit_coefficient_is_plain_scaling(e in -1e4..1e4f64, m in 0.0..1e7f64) {
        let extrapolated = extrapolate(kg(e), m, &ExtrapolationCoefficient::user(1.0)).unwrap();
        prop_assert_eq!(extrapolated, kg(e) * m);
    }

    #[test]
    fn overstatement_is_exactly_the_rebound_reference_footprint(
        a_m in fp(), a_r in fp(), o in fp(), s in fp()
    ) {
        let d = naive_effect_and_overstatement(kg(a_m + a_r), kg(a_r), kg(o), kg(s)).unwrap();
        prop_assert_eq!(d.overstatement, kg(a_r));
        let scale = (a_m + a_r).max(o + s);
        prop_assert!(approx_eq_scaled((d.naive - d.correct).as_kg(), a_r, scale));
    }

    #[test]
    fn model_effect_is_linear_in_usages(e in -1e4..1e4f64, m in 0.0..1e7f64, c in 0.0..100.0f64) {
        let once = model_based_effect(kg(e), m).unwrap().as_kg();
        let scaled = model_based_effect(kg(e), c * m).unwrap().as_kg();
        prop_assert!(approx_eq(scaled, c * once));
    }

    #[test]
    fn extrapolation_is_linear_in_usages_and_k(
        e in -1e4..1e4f64, m in 0.0..1e7f64, k in 0.01..2.0f64, c in 0.01..100.0f64
    ) {
        let base = extrapolate(kg(e), m, &ExtrapolationCoefficient::user(k)).unwrap().as_kg();
        let more_usages = extrapolate(kg(e), c * m, &ExtrapolationCoefficient::user(k)).unwrap().as_kg();
        let larger_k = extrapolate(kg(e), m, &ExtrapolationCoefficient::user(c * k)).unwrap().as_kg();
        prop_assert!(approx_eq(more_usages, c * base));
        prop_assert!(approx_eq(larger_k, c * base));
    }

    #[test]
    fn pipeline_is_linear_in_usages_and_k(
        cs in case_study(8, true), m in 0.0..1e7f64, k in 0.01..2.0f64, c in 0.01..100.0f64
    ) {
        let base = full_pipeline(&cs, m, &ExtrapolationCoefficient::user(k)).unwrap().as_kg();
        let more_usages = full_pipeline(&cs, c * m, &ExtrapolationCoefficient::user(k)).unwrap().as_kg();
        let larger_k = full_pipeline(&cs, m, &ExtrapolationCoefficient::user(c * k)).unwrap().as_kg();
        prop_assert!(approx_eq(more_usages, c * base));
        prop_assert!(approx_eq(larger_k, c * base));
    }

    #[test]
    fn pipeline_at_unit_k_and_sample_size_is_the_case_study_effect(cs in case_study(8, true)) {
        let n = cs.modified.len() as f64;
        let piped = full_pipeline(&cs, n, &ExtrapolationCoefficient::user(1.0)).unwrap().as_kg();
        let direct = case_study_effect_with_rebound(&cs).unwrap().as_kg();
        prop_assert!(approx_eq(piped, direct));
    }

    #[test]
    fn pipeline_without_rebound_is_extrapolated_average(
        cs in case_study(8, false), m in 0.0..1e7f64, k in 0.01..2.0f64
    ) {
        let coeff = ExtrapolationCoefficient::user(k);
        let piped = full_pipeline(&cs, m, &coeff).unwrap().as_kg();
        let composed = extrapolate(case_study_average(&cs).unwrap(), m, &coeff).unwrap().as_kg();
        let scale = cs.modified.iter().map(|i| i.fp_a.as_kg() + i.fp_a_opt.as_kg() + i.fp_s.as_kg()).sum::<f64>()
            * k * m / cs.modified.len() as f64;
        prop_assert!(approx_eq_scaled(piped, composed, scale));
    }

    #[test]
    fn extra_service_footprint_never_raises_the_effect(
        a_m in fp(), o in fp(), s in fp(), extra in fp()
    ) {
        let before = effect_with_rebound(kg(a_m), kg(o), kg(s)).unwrap();
        let after = effect_with_rebound(kg(a_m), kg(o), kg(s + extra)).unwrap();
        prop_assert!(after <= before);
    }

    #[test]
    fn added_rebound_instance_never_raises_the_case_study_effect(
        cs in case_study(8, true), o in fp(), s in fp()
    ) {
        let before = case_study_effect_with_rebound(&cs).unwrap();
        let mut more = cs.clone();
        more.rebound.push(ReboundInstance::new("extra", o, s));
        let after = case_study_effect_with_rebound(&more).unwrap();
        prop_assert!(after <= before);
    }
}
