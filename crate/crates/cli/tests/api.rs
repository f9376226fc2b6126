use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ictimpact_cli::server::{router, AppState};
use ictimpact_cli::SeedPolicy;
use ictimpact_core::workbench::{
    parse_scenario, run_assessment, to_canonical_json, ParseMode, RunOptions,
};
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn app() -> Router {
    router(AppState::new(4, SeedPolicy::Fixed(5)))
}

async fn call(app: &Router, method: Method, uri: &str, body: impl Into<Body>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn errors(body: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(body).unwrap()["errors"].as_array().unwrap().clone()
}

#[tokio::test]
async fn assess_returns_the_canonical_report() {
    let text = fixture("golden_case_study.json");
    let (status, body) = call(&app(), Method::POST, "/v1/assess?seed=7", text.clone()).await;
    assert_eq!(status, StatusCode::OK);
    let doc = parse_scenario(&text, ParseMode::Strict).unwrap();
    let expected = to_canonical_json(&run_assessment(&doc, &RunOptions::new(7)).unwrap());
    assert_eq!(body, expected);
}

#[tokio::test]
async fn assess_uses_the_seed_policy_when_no_seed_is_given() {
    let (_, body) = call(&app(), Method::POST, "/v1/assess", fixture("golden_aggregate.json")).await;
    let report: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(report["result"]["provenance"]["seed"], 5);
}

#[tokio::test]
async fn assess_errors_carry_field_paths() {
    let app = app();
    let cases = [
        ("invalid/missing_m_count.json", StatusCode::BAD_REQUEST, "missing_field", "scenario.partition.m_count"),
        ("invalid/version_999.json", StatusCode::BAD_REQUEST, "schema_version", "schema_version"),
        ("invalid/syntax.json", StatusCode::BAD_REQUEST, "syntax", ""),
        ("invalid/negative_m_count.json", StatusCode::UNPROCESSABLE_ENTITY, "validation", "scenario.partition.m_count"),
        ("unknown_fields.json", StatusCode::BAD_REQUEST, "unknown_field", "metadata.tags"),
    ];
    for (name, status, code, path) in cases {
        let (got, body) = call(&app, Method::POST, "/v1/assess?seed=1", fixture(name)).await;
        assert_eq!(got, status, "{name}");
        let errs = errors(&body);
        assert_eq!(errs[0]["code"], code, "{name}");
        assert_eq!(errs[0]["path"], path, "{name}");
    }
    let (status, _) = call(&app, Method::POST, "/v1/assess?seed=1&lenient=true", fixture("unknown_fields.json")).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn sensitivity_envelope() {
    let app = app();
    let doc: Value = serde_json::from_str(&fixture("golden_case_study.json")).unwrap();
    let req = json!({"document": doc, "mode": "tornado"});
    let (status, body) = call(&app, Method::POST, "/v1/sensitivity", req.to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["tornado"].as_array().unwrap().len(), 3);
    assert!(v["monte_carlo"].is_null());

    let req = json!({"document": doc, "mode": "montecarlo", "samples": 1000, "seed": 3});
    let (_, a) = call(&app, Method::POST, "/v1/sensitivity", req.to_string()).await;
    let (_, b) = call(&app, Method::POST, "/v1/sensitivity", req.to_string()).await;
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["monte_carlo"]["samples"], 1000);

    let (status, body) = call(&app, Method::POST, "/v1/sensitivity", json!({"document": doc}).to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(errors(&body)[0]["path"], "mode");

    let mut bad = doc.clone();
    bad["scenario"]["partition"].as_object_mut().unwrap().remove("m_count");
    let (status, body) =
        call(&app, Method::POST, "/v1/sensitivity", json!({"document": bad, "mode": "tornado"}).to_string()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(errors(&body)[0]["path"], "document.scenario.partition.m_count");
}

#[tokio::test]
async fn audit_and_baseline() {
    let app = app();
    let (status, body) = call(&app, Method::POST, "/v1/audit", fixture("ntt_2013.json")).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    let codes: Vec<_> = v["flags"].as_array().unwrap().iter().map(|f| f["code"].as_str().unwrap()).collect();
    assert!(codes.contains(&"FUTURE_SHARE_REUSE") && codes.contains(&"REBOUND_IGNORED"));
    assert_eq!(v["has_errors"], true);

    let doc: Value = serde_json::from_str(&fixture("golden_case_study.json")).unwrap();
    let (status, body) =
        call(&app, Method::POST, "/v1/baseline", json!({"document": doc, "horizon": 4}).to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["trajectory"].as_array().unwrap().len(), 4);

    let (status, body) =
        call(&app, Method::POST, "/v1/baseline", json!({"document": doc, "horizon": 40}).to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(errors(&body)[0]["path"], "scenario.with_service");
}

#[tokio::test]
async fn schema_endpoint() {
    let (status, body) = call(&app(), Method::GET, "/v1/schema", Body::empty()).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["supported_versions"], json!([1]));
    assert_eq!(v["schema"]["type"], "object");
}

#[tokio::test]
async fn scenario_store() {
    let app = app();
    let text = fixture("golden_aggregate.json");
    let (status, body) = call(&app, Method::PUT, "/v1/scenarios/fleet", text.clone()).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["revision"], 1);
    let (_, body) = call(&app, Method::PUT, "/v1/scenarios/fleet", text.clone()).await;
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["revision"], 2);

    let (status, body) = call(&app, Method::GET, "/v1/scenarios/fleet", Body::empty()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, text);

    let (status, body) = call(&app, Method::GET, "/v1/scenarios/nope", Body::empty()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(errors(&body)[0]["path"], "id");

    let (status, _) = call(&app, Method::PUT, "/v1/scenarios/bad", fixture("invalid/negative_m_count.json")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = call(&app, Method::PUT, "/v1/scenarios/extra?lenient=true", fixture("unknown_fields.json")).await;
    assert_eq!(status, StatusCode::OK);
    let (_, body) = call(&app, Method::GET, "/v1/scenarios/extra", Body::empty()).await;
    assert!(body.contains("A. Reviewer"));

    for id in ["c", "d"] {
        call(&app, Method::PUT, &format!("/v1/scenarios/{id}"), text.clone()).await;
    }
    let (status, _) = call(&app, Method::PUT, "/v1/scenarios/overflow", text.clone()).await;
    assert_eq!(status, StatusCode::INSUFFICIENT_STORAGE);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_assessments_agree() {
    let app = app();
    let text = fixture("golden_case_study.json");
    let tasks: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            let text = text.clone();
            tokio::spawn(async move { call(&app, Method::POST, "/v1/assess?seed=11", text).await })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        let (status, body) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        bodies.push(body);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}
