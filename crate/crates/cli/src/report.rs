//! Machine-readable reports.
//!
//! The `report` object depends only on the invocation and input contents, so
//! repeated runs serialize it to identical bytes. Wall time lives beside it.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const NATS: &str = "nats";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Spectral,
    Variational,
    Renewal,
    Enumeration,
    ClosedForm,
    Bisection,
    Sampling,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: Value,
    pub method: Method,
    pub unit: String,
}

/// Two methods applied to one quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub name: String,
    pub methods: [Method; 2],
    pub values: [f64; 2],
    pub discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Vec<Entry>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Serialize)]
struct Envelope<'a> {
    report: &'a Report,
    timing: &'a Timing,
}

/// SHA-256 over the length-prefixed contents of every input, in order.
pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for text in inputs {
        h.update((text.len() as u64).to_le_bytes());
        h.update(text.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: Vec<String>, inputs_digest: String) -> Self {
        Report { command, inputs_digest, results: Vec::new(), certificates: Vec::new() }
    }

    pub fn push(&mut self, name: &str, value: impl Into<Value>, method: Method, unit: &str) {
        self.results.push(Entry { name: name.into(), value: value.into(), method, unit: unit.into() });
    }

    pub fn certify(&mut self, name: &str, methods: [Method; 2], values: [f64; 2], tolerance: f64, unit: &str) {
        let discrepancy = (values[0] - values[1]).abs();
        self.certificates.push(Certificate {
            name: name.into(),
            methods,
            values,
            discrepancy,
            tolerance,
            passed: discrepancy <= tolerance,
            unit: unit.into(),
        });
    }

    /// Converts every nat-valued number to bits.
    pub fn to_bits(&mut self) {
        let ln2 = std::f64::consts::LN_2;
        for e in &mut self.results {
            if e.unit == NATS {
                e.value = convert(&e.value, ln2);
                e.unit = "bits".into();
            }
        }
        for c in &mut self.certificates {
            if c.unit == NATS {
                c.values = c.values.map(|v| v / ln2);
                c.discrepancy /= ln2;
                c.tolerance /= ln2;
                c.unit = "bits".into();
            }
        }
    }

    /// The deterministic payload.
    pub fn payload(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self, timing: &Timing) -> String {
        serde_json::to_string_pretty(&Envelope { report: self, timing }).expect("report serializes")
    }
}

fn convert(v: &Value, ln2: f64) -> Value {
    match v {
        Value::Number(n) => n.as_f64().map(|x| Value::from(x / ln2)).unwrap_or_else(|| v.clone()),
        Value::Array(items) => Value::Array(items.iter().map(|x| convert(x, ln2)).collect()),
        other => other.clone(),
    }
}
