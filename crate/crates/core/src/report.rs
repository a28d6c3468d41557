//! Sweep reports and their JSON, CSV and plain-text renderings.
//!
//! JSON documents have the top-level keys `suite`, `params`, `entries`,
//! `violations` and `timing`. Entries are flat objects; in CSV every entry
//! becomes a row under the suite's fixed header, with list values written
//! as space-separated numbers.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub type Entry = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
    pub message: String,
}

impl Violation {
    pub fn at(p: u64, k: u64, message: impl Into<String>) -> Self {
        Violation {
            p: Some(p),
            k: Some(k),
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Violation {
            p: None,
            k: None,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub suite: String,
    pub params: Map<String, Value>,
    #[serde(skip)]
    pub columns: Vec<String>,
    pub entries: Vec<Entry>,
    pub violations: Vec<Violation>,
    pub timing: Vec<PhaseTiming>,
}

impl SweepReport {
    pub fn new(suite: &str, columns: &[&str]) -> Self {
        SweepReport {
            suite: suite.to_string(),
            params: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            entries: Vec::new(),
            violations: Vec::new(),
            timing: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record_phase(&mut self, phase: &str, started: Instant) {
        self.timing.push(PhaseTiming {
            phase: phase.to_string(),
            millis: started.elapsed().as_secs_f64() * 1e3,
        });
    }

    /// Everything except the timing block, for reproducibility checks.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.timing.clear();
        copy.to_json()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for e in &self.entries {
            let row: Vec<String> = self
                .columns
                .iter()
                .map(|c| e.get(c).map(csv_cell).unwrap_or_default())
                .collect();
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", csv_cell(v)))
            .collect();
        let _ = writeln!(out, "suite {} ({})", self.suite, params.join(", "));
        for e in &self.entries {
            let cells: Vec<String> = self
                .columns
                .iter()
                .filter_map(|c| e.get(c).map(|v| format!("{c}={}", csv_cell(v))))
                .collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        for v in &self.violations {
            let at = match (v.p, v.k) {
                (Some(p), Some(k)) => format!("p={p} k={k}: "),
                (Some(p), None) => format!("p={p}: "),
                _ => String::new(),
            };
            let _ = writeln!(out, "  VIOLATION {at}{}", v.message);
        }
        let _ = writeln!(
            out,
            "{} entries, {} violations: {}",
            self.entries.len(),
            self.violations.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Renders one JSON value as a CSV cell.
pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> SweepReport {
        let mut r = SweepReport::new("demo", &["p", "k", "set", "ok"]).param("p_max", 13);
        let e = json!({"p": 13, "k": 3, "set": [1, 5, 8, 12], "ok": true});
        r.entries.push(e.as_object().unwrap().clone());
        r.violations.push(Violation::at(13, 2, "bad"));
        r
    }

    #[test]
    fn json_has_fixed_top_level_keys() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["suite", "params", "entries", "violations", "timing"]);
    }

    #[test]
    fn csv_rows() {
        assert_eq!(sample().to_csv(), "p,k,set,ok\n13,3,1 5 8 12,true\n");
    }

    #[test]
    fn human_marks_failure() {
        let h = sample().to_human();
        assert!(h.contains("VIOLATION p=13 k=2: bad"));
        assert!(h.ends_with("FAIL\n"));
    }
}
