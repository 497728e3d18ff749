//! JSON case files in, deterministic reports out.

mod analyses;
pub mod units;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;

pub use analyses::{analysis_ids, find, Analysis};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub schema: u32,
    pub analysis: String,
    pub params: Value,
    #[serde(default)]
    pub meta: Option<Meta>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable, unparsable or schema-violating case.
    Malformed(String),
    /// The analysis ran and failed.
    Analysis(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Analysis(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Malformed(m) => json!({"error": {"kind": "malformed_input", "message": m}}),
            CliError::Analysis(e) => json!({"error": {
                "kind": e.kind(),
                "message": e.to_string(),
                "diagnostics": e.diagnostics(),
            }}),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Malformed(m) => write!(f, "malformed input: {m}"),
            CliError::Analysis(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Analysis(e)
    }
}

/// Result values keyed by name, plus diagnostics.
#[derive(Debug, Clone, Default)]
pub struct Out {
    results: BTreeMap<String, Value>,
    diagnostics: Vec<String>,
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(
        || {
            Value::String(if x.is_nan() {
                "NaN".into()
            } else if x > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            })
        },
        Value::Number,
    )
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = num(units::round6(n.as_f64().unwrap_or(0.0))),
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

impl Out {
    pub fn new() -> Self {
        Out::default()
    }

    /// A scalar quantity in base units.
    pub fn q(mut self, name: &str, x: f64, unit: &str) -> Self {
        let (v, u) = units::scale(&[x], unit);
        self.results
            .insert(name.into(), json!({"value": num(v[0]), "unit": u}));
        self
    }

    /// A list of quantities sharing one prefix.
    pub fn qs(mut self, name: &str, xs: &[f64], unit: &str) -> Self {
        let (v, u) = units::scale(xs, unit);
        let vals: Vec<Value> = v.into_iter().map(num).collect();
        self.results.insert(name.into(), json!({"value": vals, "unit": u}));
        self
    }

    pub fn count(mut self, name: &str, n: impl Into<i128>) -> Self {
        let n: i128 = n.into();
        self.results
            .insert(name.into(), json!({"value": n as i64, "unit": "count"}));
        self
    }

    pub fn raw(mut self, name: &str, v: impl Serialize) -> Self {
        let mut v = serde_json::to_value(v).unwrap_or(Value::Null);
        round_floats(&mut v);
        self.results.insert(name.into(), v);
        self
    }

    pub fn note(mut self, d: impl Into<String>) -> Self {
        self.diagnostics.push(d.into());
        self
    }

    pub fn notes(mut self, ds: impl IntoIterator<Item = String>) -> Self {
        self.diagnostics.extend(ds);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub analysis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub inputs: Value,
    pub results: BTreeMap<String, Value>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.results.get(name)
    }

    /// Scalar result in base units.
    pub fn get_si(&self, name: &str) -> Option<f64> {
        let r = self.results.get(name)?;
        let unit = r.get("unit").and_then(Value::as_str).unwrap_or("");
        let v = r.get("value")?.as_f64()?;
        Some(units::to_base(v, unit))
    }

    /// List result in base units.
    pub fn get_list_si(&self, name: &str) -> Option<Vec<f64>> {
        let r = self.results.get(name)?;
        let unit = r.get("unit").and_then(Value::as_str).unwrap_or("");
        r.get("value")?
            .as_array()?
            .iter()
            .map(|v| v.as_f64().map(|x| units::to_base(x, unit)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "analysis  {}", self.analysis);
        if let Some(l) = &self.label {
            let _ = writeln!(s, "label     {l}");
        }
        let width = self.results.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        for (k, v) in &self.results {
            let text = match (v.get("value"), v.get("unit").and_then(Value::as_str)) {
                (Some(val), Some(unit)) if v.as_object().is_some_and(|o| o.len() == 2) => {
                    let val = match val {
                        Value::Array(items) => items
                            .iter()
                            .map(plain)
                            .collect::<Vec<_>>()
                            .join(", "),
                        other => plain(other),
                    };
                    if unit.is_empty() || unit == "count" {
                        val
                    } else {
                        format!("{val} {unit}")
                    }
                }
                _ => v.to_string(),
            };
            let pad = width - k.chars().count();
            let _ = writeln!(s, "  {k}{}  {text}", " ".repeat(pad));
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        s
    }
}

/// Numbers without a trailing `.0`.
fn plain(v: &Value) -> String {
    match v.as_f64() {
        Some(x) if v.is_f64() => x.to_string(),
        _ => v.to_string(),
    }
}

/// Parses case text and checks it against the analysis schema without running it.
pub fn parse_case(text: &str) -> Result<(CaseFile, &'static Analysis, Value), CliError> {
    let case: CaseFile =
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    if case.schema != SCHEMA_VERSION {
        return Err(CliError::Malformed(format!(
            "unsupported schema {}, expected {SCHEMA_VERSION}",
            case.schema
        )));
    }
    let analysis = find(&case.analysis)
        .ok_or_else(|| CliError::Malformed(format!("unknown analysis `{}`", case.analysis)))?;
    let mut params = case.params.clone();
    units::expand_si(&mut params);
    (analysis.check)(&params).map_err(|e| CliError::Malformed(format!("params: {e}")))?;
    Ok((case, analysis, params))
}

pub fn validate_case(text: &str) -> Result<(), CliError> {
    parse_case(text).map(|_| ())
}

pub fn run_case(text: &str) -> Result<Report, CliError> {
    let (case, analysis, params) = parse_case(text)?;
    let out = (analysis.run)(&params)?;
    Ok(Report {
        schema: SCHEMA_VERSION,
        analysis: case.analysis,
        label: case.meta.and_then(|m| m.label),
        inputs: params,
        results: out.results,
        diagnostics: out.diagnostics,
    })
}

pub fn run_case_file(path: &std::path::Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    run_case(&text)
}

/// One line per analysis: id, then its parameter summary.
pub fn list_text() -> String {
    let mut s = String::new();
    let width = analyses::ANALYSES.iter().map(|a| a.id.len()).max().unwrap_or(0);
    for a in analyses::ANALYSES {
        let _ = writeln!(s, "{:width$}  {}", a.id, a.summary);
        let _ = writeln!(s, "{:width$}  params: {}", "", a.params);
    }
    s
}
