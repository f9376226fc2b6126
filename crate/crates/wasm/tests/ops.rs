use ictimpact_core::workbench::{parse_scenario, run_assessment, ParseMode, RunOptions};
use ictimpact_wasm::ops::{baseline_trajectory, rebound_sweep, what_if};
use serde_json::Value;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn headline(doc: &str, overrides: &str) -> f64 {
    json(&what_if(doc, overrides).unwrap())["effect_kg"].as_f64().unwrap()
}

#[test]
fn untouched_sliders_match_the_assessment() {
    let doc = fixture("golden_case_study.json");
    let report = run_assessment(&parse_scenario(&doc, ParseMode::Strict).unwrap(), &RunOptions::new(1)).unwrap();
    let w = json(&what_if(&doc, "").unwrap());
    assert_eq!(w["effect_kg"].as_f64().unwrap(), report.result.effect.as_kg());
    assert_eq!(w["overstatement_kg"].as_f64().unwrap(), 9000.0);
    assert_eq!(w["params"]["coefficient.k"], 1.0);
}

#[test]
fn doubling_k_doubles_the_headline() {
    for name in ["golden_case_study.json", "smart_meter_volunteer.json"] {
        let doc = fixture(name);
        let one = headline(&doc, r#"{"coefficient.k": 0.4}"#);
        let two = headline(&doc, r#"{"coefficient.k": 0.8}"#);
        assert!((two - 2.0 * one).abs() <= 1e-9 * two.abs(), "{name}");
    }
}

#[test]
fn zero_rebound_share_has_no_overstatement_on_the_aggregate_path() {
    let doc = fixture("ntt_2013.json");
    let w = json(&what_if(&doc, r#"{"rebound_share": 0.0}"#).unwrap());
    assert_eq!(w["overstatement_kg"], 0.0);
    assert_eq!(w["naive_kg"], w["effect_kg"]);
}

#[test]
fn sweep_covers_zero_to_one() {
    let doc = fixture("ntt_2013.json");
    let pts = json(&rebound_sweep(&doc, "{}", 11).unwrap());
    let pts = pts.as_array().unwrap();
    assert_eq!(pts.len(), 11);
    assert_eq!(pts[0]["rebound_share"], 0.0);
    assert_eq!(pts[10]["rebound_share"], 1.0);
    let over: Vec<f64> = pts.iter().map(|p| p["overstatement_kg"].as_f64().unwrap()).collect();
    assert!(over.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn trajectory_follows_growth_override() {
    let doc = fixture("golden_case_study.json");
    let slow = json(&baseline_trajectory(&doc, r#"{"baseline.growth": 0.0}"#).unwrap());
    let fast = json(&baseline_trajectory(&doc, r#"{"baseline.growth": 0.05}"#).unwrap());
    assert_eq!(slow.as_array().unwrap().len(), 5);
    let last = |v: &Value| v[4]["baseline"]["value"].as_f64().unwrap();
    assert!(last(&fast) > last(&slow));
    assert!(baseline_trajectory(&fixture("ntt_2010.json"), "").unwrap_err().contains("scenario.with_service"));
}

#[test]
fn errors_are_structured() {
    let err = what_if(&fixture("invalid/missing_m_count.json"), "").unwrap_err();
    assert_eq!(json(&err)["errors"][0]["path"], "scenario.partition.m_count");
    let err = what_if(&fixture("golden_case_study.json"), r#"{"nonsense": 1}"#).unwrap_err();
    assert_eq!(json(&err)["errors"][0]["path"], "overrides");
    let err = what_if(&fixture("golden_case_study.json"), r#"{"rebound_share": 2}"#).unwrap_err();
    assert_eq!(json(&err)["errors"][0]["code"], "computation");
}

#[test]
fn audit_follows_the_k_slider() {
    let doc = fixture("smart_meter_volunteer.json");
    let codes = |o: &str| -> Vec<String> {
        json(&what_if(&doc, o).unwrap())["audit_flags"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["code"].as_str().unwrap().to_string())
            .collect()
    };
    assert!(!codes(r#"{"coefficient.k": 0.15}"#).contains(&"VOLUNTEER_EXTRAPOLATION".to_string()));
    assert!(codes(r#"{"coefficient.k": 0.8}"#).contains(&"VOLUNTEER_EXTRAPOLATION".to_string()));
}
