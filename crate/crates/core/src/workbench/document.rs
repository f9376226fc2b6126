use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::domain::{validate_scenario, AssessmentScenario};

pub const SCHEMA_VERSION: u32 = 1;
pub const SUPPORTED_VERSIONS: &[u32] = &[SCHEMA_VERSION];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default)]
    pub date: Option<String>,
}

/// A versioned scenario file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub metadata: Metadata,
    pub scenario: AssessmentScenario,
    /// Fields the schema does not know, keyed by JSON pointer. Only filled in
    /// lenient mode; written back on serialization.
    #[serde(skip)]
    pub unknown_fields: BTreeMap<String, Value>,
}

impl ScenarioDocument {
    pub fn new(scenario: AssessmentScenario) -> Self {
        ScenarioDocument {
            schema_version: SCHEMA_VERSION,
            metadata: Metadata::default(),
            scenario,
            unknown_fields: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Unknown fields are errors.
    #[default]
    Strict,
    /// Unknown fields are kept and written back unchanged.
    Lenient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueCode {
    Syntax,
    SchemaVersion,
    MissingField,
    InvalidValue,
    UnknownField,
    Validation,
    Computation,
}

/// One structured problem with an input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub code: IssueCode,
    /// Dotted path from the document root, e.g. `scenario.partition.m_count`.
    pub path: String,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl Issue {
    pub fn new(code: IssueCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Issue {
            code,
            path: path.into(),
            message: message.into(),
            line: None,
            column: None,
        }
    }

    fn at(mut self, line: usize, column: usize) -> Self {
        self.line = Some(line);
        self.column = Some(column);
        self
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "[{:?}] {}", self.code, self.message)?;
        } else {
            write!(f, "[{:?}] {}: {}", self.code, self.path, self.message)?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " (line {l}, column {c})")?;
        }
        Ok(())
    }
}

/// Errors of the workbench layer, always carrying at least one [`Issue`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct WorkbenchError {
    pub issues: Vec<Issue>,
}

impl WorkbenchError {
    pub fn single(issue: Issue) -> Self {
        WorkbenchError {
            issues: vec![issue],
        }
    }

    pub fn computation(path: impl Into<String>, err: impl fmt::Display) -> Self {
        Self::single(Issue::new(IssueCode::Computation, path, err.to_string()))
    }

    pub fn has(&self, code: IssueCode) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }
}

impl fmt::Display for WorkbenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

fn dotted(path: &serde_path_to_error::Path) -> String {
    let s = path.to_string();
    if s == "." {
        String::new()
    } else {
        s
    }
}

fn join(parent: &str, child: &str) -> String {
    if parent.is_empty() {
        child.to_string()
    } else {
        format!("{parent}.{child}")
    }
}

fn check_version(value: &Value) -> Result<(), Issue> {
    let supported = SUPPORTED_VERSIONS
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    match value.get("schema_version") {
        None => Err(Issue::new(
            IssueCode::MissingField,
            "schema_version",
            "schema_version missing",
        )),
        Some(v) => match v.as_u64() {
            Some(n) if SUPPORTED_VERSIONS.iter().any(|s| u64::from(*s) == n) => Ok(()),
            Some(n) => Err(Issue::new(
                IssueCode::SchemaVersion,
                "schema_version",
                format!("unsupported schema_version {n}; supported versions: {supported}"),
            )),
            None => Err(Issue::new(
                IssueCode::SchemaVersion,
                "schema_version",
                format!("schema_version must be an integer; supported versions: {supported}"),
            )),
        },
    }
}

fn typed_error(err: serde_path_to_error::Error<serde_json::Error>) -> Issue {
    let path = dotted(err.path());
    let inner = err.inner();
    let (line, column) = (inner.line(), inner.column());
    let message = inner.to_string();
    // serde_json appends " at line L column C"; keep the bare message
    let bare = message
        .rsplit_once(" at line ")
        .map_or(message.as_str(), |(m, _)| m)
        .to_string();
    if inner.is_syntax() || inner.is_eof() {
        return Issue::new(IssueCode::Syntax, path, bare).at(line, column);
    }
    let issue = match bare
        .strip_prefix("missing field `")
        .and_then(|rest| rest.strip_suffix('`'))
    {
        Some(field) => {
            let full = join(&path, field);
            Issue::new(IssueCode::MissingField, full.clone(), format!("{full} missing"))
        }
        None => Issue::new(IssueCode::InvalidValue, path, bare),
    };
    issue.at(line, column)
}

fn escape_pointer(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// Object keys present in `input` but absent from `canonical`, as
/// (JSON pointer, dotted path, value).
fn unknown_keys(input: &Value, canonical: &Value, pointer: &str, path: &str, out: &mut Vec<(String, String, Value)>) {
    match (input, canonical) {
        (Value::Object(inp), Value::Object(can)) => {
            for (key, v) in inp {
                let ptr = format!("{pointer}/{}", escape_pointer(key));
                let p = join(path, key);
                match can.get(key) {
                    None => out.push((ptr, p, v.clone())),
                    Some(cv) => unknown_keys(v, cv, &ptr, &p, out),
                }
            }
        }
        (Value::Array(inp), Value::Array(can)) => {
            for (i, (v, cv)) in inp.iter().zip(can).enumerate() {
                unknown_keys(v, cv, &format!("{pointer}/{i}"), &format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// Parses and validates a scenario document.
///
/// Quantities given in tonnes are converted to kilograms. Every problem is
/// reported as an [`Issue`] with the dotted path of the offending field.
pub fn parse_scenario(text: &str, mode: ParseMode) -> Result<ScenarioDocument, WorkbenchError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let bare = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
        WorkbenchError::single(Issue::new(IssueCode::Syntax, "", bare).at(e.line(), e.column()))
    })?;
    if !value.is_object() {
        return Err(WorkbenchError::single(Issue::new(
            IssueCode::InvalidValue,
            "",
            "a scenario document must be a JSON object",
        )));
    }
    check_version(&value).map_err(WorkbenchError::single)?;

    let mut de = serde_json::Deserializer::from_str(text);
    let mut doc: ScenarioDocument =
        serde_path_to_error::deserialize(&mut de).map_err(|e| WorkbenchError::single(typed_error(e)))?;

    let canonical = serde_json::to_value(&doc).expect("document serializes");
    let mut unknown = Vec::new();
    unknown_keys(&value, &canonical, "", "", &mut unknown);
    match mode {
        ParseMode::Strict if !unknown.is_empty() => {
            return Err(WorkbenchError {
                issues: unknown
                    .into_iter()
                    .map(|(_, path, _)| Issue::new(IssueCode::UnknownField, path, "unknown field"))
                    .collect(),
            })
        }
        ParseMode::Strict => {}
        ParseMode::Lenient => {
            doc.unknown_fields = unknown.into_iter().map(|(ptr, _, v)| (ptr, v)).collect();
        }
    }

    check_document(&doc)?;
    Ok(doc)
}

/// Deserializes JSON text into any type, reporting problems like
/// [`parse_scenario`] does. Used for request envelopes around documents.
pub fn from_json_text<T: DeserializeOwned>(text: &str) -> Result<T, WorkbenchError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value =
        serde_path_to_error::deserialize(&mut de).map_err(|e| WorkbenchError::single(typed_error(e)))?;
    de.end().map_err(|e| {
        WorkbenchError::single(Issue::new(IssueCode::Syntax, "", "trailing characters").at(e.line(), e.column()))
    })?;
    Ok(value)
}

/// Prefixes every issue path, for documents nested in a larger request.
pub fn nest_issues(mut err: WorkbenchError, prefix: &str) -> WorkbenchError {
    for issue in &mut err.issues {
        issue.path = join(prefix, &issue.path);
    }
    err
}

/// Runs scenario validation and maps violations to issues.
pub fn check_document(doc: &ScenarioDocument) -> Result<(), WorkbenchError> {
    let report = validate_scenario(&doc.scenario);
    if report.is_valid() {
        return Ok(());
    }
    Err(WorkbenchError {
        issues: report
            .violations
            .into_iter()
            .map(|v| Issue::new(IssueCode::Validation, join("scenario", &v.path), v.message))
            .collect(),
    })
}

/// Canonical JSON of any report or document: keys sorted, two-space indent,
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    let mut out = serde_json::to_string_pretty(&value).expect("serializable");
    out.push('\n');
    out
}

/// Serializes a document canonically, restoring fields kept in lenient mode.
pub fn serialize_document(doc: &ScenarioDocument) -> String {
    let mut value = serde_json::to_value(doc).expect("document serializes");
    for (pointer, v) in &doc.unknown_fields {
        let (parent, key) = pointer.rsplit_once('/').expect("pointer has a parent");
        let key = key.replace("~1", "/").replace("~0", "~");
        if let Some(Value::Object(map)) = value.pointer_mut(parent) {
            map.insert(key, v.clone());
        }
    }
    to_canonical_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
      "schema_version": 1,
      "scenario": {
        "service_id": "video", "activity_id": "travel",
        "mechanism": "substitution",
        "period": {"unit": "year", "label": "2024"},
        "perspective": {"kind": "CS"},
        "estimation": "model",
        "model_average": {"value": 0.5, "unit": "kgCO2e"},
        "partition": {"m_count": 1000, "r_count": 0},
        "coefficient": {"k": 1.0, "source": "user"},
        "baseline": {"strategy": "fixed_at_introduction", "base_value": 100, "t0": 0}
      }
    }"#;

    #[test]
    fn minimal_document_parses() {
        let doc = parse_scenario(MINIMAL, ParseMode::Strict).unwrap();
        assert_eq!(doc.scenario.partition.m_count, 1000);
        let again = parse_scenario(&serialize_document(&doc), ParseMode::Strict).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_scenario("{\n  \"schema_version\": 1,\n  oops\n}", ParseMode::Strict).unwrap_err();
        assert_eq!(err.issues[0].code, IssueCode::Syntax);
        assert_eq!(err.issues[0].line, Some(3));
    }

    #[test]
    fn version_gate_names_supported_versions() {
        let text = MINIMAL.replace("\"schema_version\": 1", "\"schema_version\": 999");
        let err = parse_scenario(&text, ParseMode::Strict).unwrap_err();
        assert_eq!(err.issues[0].code, IssueCode::SchemaVersion);
        assert!(err.issues[0].message.contains("999"));
        assert!(err.issues[0].message.contains("supported versions: 1"));
    }

    #[test]
    fn missing_field_path() {
        let text = MINIMAL.replace("\"m_count\": 1000, ", "");
        let err = parse_scenario(&text, ParseMode::Strict).unwrap_err();
        let issue = &err.issues[0];
        assert_eq!(issue.code, IssueCode::MissingField);
        assert_eq!(issue.path, "scenario.partition.m_count");
        assert!(issue.message.ends_with("partition.m_count missing"));
    }

    #[test]
    fn wrong_type_is_an_invalid_value() {
        let text = MINIMAL.replace("\"m_count\": 1000", "\"m_count\": \"many\"");
        let err = parse_scenario(&text, ParseMode::Strict).unwrap_err();
        assert_eq!(err.issues[0].code, IssueCode::InvalidValue);
        assert_eq!(err.issues[0].path, "scenario.partition.m_count");
    }

    #[test]
    fn unknown_fields_strict_and_lenient() {
        let text = MINIMAL.replace(
            "\"r_count\": 0}",
            "\"r_count\": 0, \"colour\": \"blue\"}, \"x-note\": {\"a/b\": 1}",
        );
        let err = parse_scenario(&text, ParseMode::Strict).unwrap_err();
        let paths: Vec<_> = err.issues.iter().map(|i| i.path.as_str()).collect();
        assert_eq!(paths, vec!["scenario.partition.colour", "scenario.x-note"]);
        assert!(err.has(IssueCode::UnknownField));

        let doc = parse_scenario(&text, ParseMode::Lenient).unwrap();
        assert_eq!(doc.unknown_fields.len(), 2);
        let out = serialize_document(&doc);
        assert!(out.contains("\"colour\": \"blue\""));
        assert!(out.contains("\"a/b\": 1"));
        assert_eq!(parse_scenario(&out, ParseMode::Lenient).unwrap(), doc);
    }

    #[test]
    fn validation_failures_are_issues() {
        let text = MINIMAL.replace("\"m_count\": 1000", "\"m_count\": -1");
        let err = parse_scenario(&text, ParseMode::Strict).unwrap_err();
        assert_eq!(err.issues[0].code, IssueCode::Validation);
        assert_eq!(err.issues[0].path, "scenario.partition.m_count");
        assert!(err.issues[0].message.contains("negative cardinality"));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let doc = parse_scenario(MINIMAL, ParseMode::Strict).unwrap();
        let out = serialize_document(&doc);
        let metadata = out.find("\"metadata\"").unwrap();
        let scenario = out.find("\"scenario\"").unwrap();
        let version = out.find("\"schema_version\"").unwrap();
        assert!(metadata < scenario && scenario < version);
    }
}
