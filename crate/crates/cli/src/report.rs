//! Machine-readable reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use grpgeo::structure::PropertyVerdict;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const TOOL: &str = "grpgeo";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The published JSON schema for [`Report`].
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub property: String,
    pub params: Map<String, Value>,
    /// `None` when the check was skipped.
    pub holds: Option<bool>,
    pub witnesses: Vec<Value>,
    pub skipped: Option<String>,
    pub micros: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antecedent: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl VerdictRecord {
    pub fn new(property: &str, holds: bool) -> Self {
        VerdictRecord {
            property: property.to_string(),
            params: Map::new(),
            holds: Some(holds),
            witnesses: Vec::new(),
            skipped: None,
            micros: 0,
            antecedent: None,
            notes: Vec::new(),
            details: None,
        }
    }

    pub fn skipped(property: &str, reason: impl Into<String>) -> Self {
        VerdictRecord {
            holds: None,
            skipped: Some(reason.into()),
            ..VerdictRecord::new(property, false)
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn from_verdict(v: &PropertyVerdict) -> Self {
        let params = match serde_json::to_value(&v.params) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        VerdictRecord {
            property: v.property.clone(),
            params,
            holds: Some(v.holds),
            witnesses: v
                .witnesses
                .iter()
                .map(|w| serde_json::to_value(w).expect("witnesses serialize"))
                .collect(),
            skipped: None,
            micros: 0,
            antecedent: v.antecedent,
            notes: v.notes.clone(),
            details: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.holds == Some(false)
    }

    fn key(&self) -> String {
        if self.params.is_empty() {
            self.property.clone()
        } else {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!("{}[{}]", self.property, ps.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubjectReport {
    pub id: String,
    pub order: usize,
    pub verdicts: Vec<VerdictRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub property: String,
    pub params: Map<String, Value>,
    pub subjects: usize,
    pub holds: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Implications whose hypotheses held.
    pub antecedent_true: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: Value,
    pub subjects: Vec<SubjectReport>,
    pub aggregates: Vec<Aggregate>,
}

impl Report {
    pub fn new(config: Value, subjects: Vec<SubjectReport>) -> Report {
        let mut agg: BTreeMap<String, Aggregate> = BTreeMap::new();
        for v in subjects.iter().flat_map(|s| &s.verdicts) {
            let a = agg.entry(v.key()).or_insert_with(|| Aggregate {
                property: v.property.clone(),
                params: v.params.clone(),
                ..Aggregate::default()
            });
            a.subjects += 1;
            match v.holds {
                Some(true) => a.holds += 1,
                Some(false) => a.failed += 1,
                None => a.skipped += 1,
            }
            if v.antecedent == Some(true) {
                a.antecedent_true += 1;
            }
        }
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            config,
            subjects,
            aggregates: agg.into_values().collect(),
        }
    }

    pub fn any_failed(&self) -> bool {
        self.subjects
            .iter()
            .flat_map(|s| &s.verdicts)
            .any(VerdictRecord::failed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.tool, self.version).unwrap();
        for s in &self.subjects {
            writeln!(out, "{} (order {})", s.id, s.order).unwrap();
            for v in &s.verdicts {
                let status = match (&v.holds, &v.skipped) {
                    (_, Some(r)) => format!("skipped: {r}"),
                    (Some(true), _) => "holds".to_string(),
                    _ => "FAILS".to_string(),
                };
                let ante = match v.antecedent {
                    Some(a) => format!(" (antecedent {a})"),
                    None => String::new(),
                };
                writeln!(out, "  {}: {status}{ante}", v.key()).unwrap();
                for w in &v.witnesses {
                    writeln!(out, "    witness {w}").unwrap();
                }
                for n in &v.notes {
                    writeln!(out, "    note: {n}").unwrap();
                }
            }
        }
        if !self.aggregates.is_empty() {
            writeln!(out, "summary").unwrap();
            for a in &self.aggregates {
                let key = VerdictRecord {
                    params: a.params.clone(),
                    ..VerdictRecord::new(&a.property, true)
                }
                .key();
                writeln!(
                    out,
                    "  {key}: {} subjects, {} hold, {} fail, {} skipped, {} with antecedent true",
                    a.subjects, a.holds, a.failed, a.skipped, a.antecedent_true
                )
                .unwrap();
            }
        }
        out
    }
}

/// A witness-shaped value describing a failed internal cross-check.
pub fn disagreement(detail: impl Into<String>) -> Value {
    json!({ "kind": "disagreement", "detail": detail.into() })
}
