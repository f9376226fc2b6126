//! wasm-bindgen exports for the single-page demo in `www/`.
//!
//! Every export takes the scenario document as JSON text and returns JSON
//! text. Failures are thrown as a JSON string `{"errors": [...]}` with the
//! same issue objects as the HTTP API.

use wasm_bindgen::prelude::*;

pub mod ops;

/// Headline results with slider overrides applied.
#[wasm_bindgen]
pub fn what_if(doc_json: &str, overrides_json: &str) -> Result<String, JsValue> {
    ops::what_if(doc_json, overrides_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rebound_sweep(doc_json: &str, overrides_json: &str, points: u32) -> Result<String, JsValue> {
    ops::rebound_sweep(doc_json, overrides_json, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn baseline_trajectory(doc_json: &str, overrides_json: &str) -> Result<String, JsValue> {
    ops::baseline_trajectory(doc_json, overrides_json).map_err(|e| JsValue::from_str(&e))
}

/// The bundled example scenario the page starts from.
#[wasm_bindgen]
pub fn example_document() -> String {
    include_str!("../../core/fixtures/golden_case_study.json").to_string()
}
