//! Report documents and their JSON, CSV and text renderings.
//!
//! JSON output is canonical: `serde_json::Map` keeps keys sorted, and every
//! document carries `schema_version` "1".

use std::fmt::Write as _;

use quarticles_core::claims::Rational;
use quarticles_core::discern::{DiscernibilityVerdict, Witness};
use quarticles_core::probability::{is_real, Atom, Query};
use quarticles_core::{tolerance, C64};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";
pub const CSV_HEADER: [&str; 5] = ["slot", "eigenvalue", "value_ij", "value_ji", "abs_diff"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub slot: usize,
    pub eigenvalue: f64,
    pub value_ij: f64,
    pub value_ji: f64,
}

/// A finished command result, renderable in any supported format.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub body: Map<String, Value>,
    pub text: String,
    pub table: Option<Vec<CsvRow>>,
    /// Whether every verification in the command held.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, input: Value) -> Self {
        Report {
            command,
            input,
            body: Map::new(),
            text: String::new(),
            table: None,
            ok: true,
        }
    }

    pub fn insert(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn to_json(&self, timing: Option<f64>) -> Value {
        let mut doc = self.body.clone();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("input".into(), self.input.clone());
        doc.insert("ok".into(), json!(self.ok));
        if let Some(seconds) = timing {
            doc.insert("timing".into(), json!({ "seconds": seconds }));
        }
        Value::Object(doc)
    }

    /// Renders the report; `Err` means the format does not apply to this command.
    pub fn render(&self, format: Format, timing: Option<f64>) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json(timing)).expect("json values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Text => {
                let mut s = self.text.clone();
                if let Some(seconds) = timing {
                    let _ = writeln!(s, "elapsed: {seconds:.3} s");
                }
                Ok(s)
            }
            Format::Csv => {
                let rows = self
                    .table
                    .as_ref()
                    .ok_or_else(|| format!("csv output covers probability tables only; `{}` has none", self.command))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
                for r in rows {
                    w.write_record([
                        r.slot.to_string(),
                        r.eigenvalue.to_string(),
                        r.value_ij.to_string(),
                        r.value_ji.to_string(),
                        (r.value_ij - r.value_ji).abs().to_string(),
                    ])
                    .map_err(|e| e.to_string())?;
                }
                String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
            }
        }
    }
}

pub fn complex(v: C64) -> Value {
    json!({ "re": v.re, "im": v.im, "real": is_real(v) })
}

/// Short decimal form used in text output.
pub fn fmt_value(v: C64) -> String {
    if is_real(v) {
        format!("{:.12}", v.re)
    } else {
        format!("{:.12}{:+.12}i", v.re, v.im)
    }
}

pub fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

pub fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn atom(a: &Atom) -> Value {
    json!({ "observable": a.family().name(), "slot": a.slot(), "eigenvalue": a.value() })
}

pub fn query(q: &Query) -> Value {
    json!({
        "text": q.to_string(),
        "conclusion": q.conclusion().iter().map(atom).collect::<Vec<_>>(),
        "condition": q.condition().iter().map(atom).collect::<Vec<_>>(),
    })
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "query": query(&w.query),
        "value_ij": complex(w.value_ij),
        "value_ji": complex(w.value_ji),
        "abs_diff": w.gap(),
        "threshold": tolerance::WITNESS,
    })
}

pub fn verdict(v: &DiscernibilityVerdict) -> Value {
    json!({
        "pair": [v.pair.0, v.pair.1],
        "character": v.character.as_str(),
        "indiscernible": v.indiscernible,
        "witness": v.witness.as_ref().map(witness),
        "search_budget_used": v.search_budget_used,
        "inconclusive": v.inconclusive,
        "tolerance": tolerance::COMPARE,
    })
}

fn evaluations(n: usize) -> String {
    if n == 1 {
        String::from("1 evaluation")
    } else {
        format!("{n} evaluations")
    }
}

pub fn verdict_line(v: &DiscernibilityVerdict) -> String {
    let (i, j) = v.pair;
    let mut s = format!("pair ({i},{j}): {}", v.character.as_str());
    if v.indiscernible {
        s.push_str(", indiscernible");
    } else {
        s.push_str(", discernible");
    }
    match &v.witness {
        Some(w) => {
            let _ = write!(
                s,
                "; witness {} = {} vs {} (gap {:.3e}, {})",
                w.query,
                fmt_value(w.value_ij),
                fmt_value(w.value_ji),
                w.gap(),
                evaluations(v.search_budget_used)
            );
        }
        None if v.inconclusive => {
            let _ = write!(s, "; no witness within {} (inconclusive search)", evaluations(v.search_budget_used));
        }
        None => {
            let _ = write!(s, "; no witness in {}", evaluations(v.search_budget_used));
        }
    }
    s
}
