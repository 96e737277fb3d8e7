//! Reports (`qcenter-report/1`) and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "qcenter-report/1";

/// Where and how an assertion failed. `degree` is the polynomial degree
/// slice, `order` the lowest `ħ`-order of the residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub detail: String,
}

impl Failure {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure { check: check.into(), sample: None, degree: None, order: None, detail: detail.into() }
    }

    pub fn sample(mut self, sample: usize) -> Self {
        self.sample = Some(sample);
        self
    }

    pub fn degree(mut self, degree: u32) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn order(mut self, order: Option<usize>) -> Self {
        self.order = order;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub passed: bool,
    pub summary: Value,
    pub failures: Vec<Failure>,
}

impl TaskReport {
    pub fn new(task: &str, summary: Value, failures: Vec<Failure>) -> Self {
        TaskReport { task: task.to_string(), passed: failures.is_empty(), summary, failures }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    pub truncation: usize,
    pub max_degree: u32,
    pub test_degree: u32,
    pub seed: u64,
    pub n: usize,
    pub lie_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub scenario: String,
    pub parameters: Parameters,
    pub passed: bool,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn new(scenario: &str, parameters: Parameters, tasks: Vec<TaskReport>) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            scenario: scenario.to_string(),
            parameters,
            passed: tasks.iter().all(|t| t.passed),
            tasks,
        }
    }

    pub fn task(&self, name: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.task == name)
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.parameters;
        let _ = writeln!(out, "scenario {}: {}", self.scenario, verdict(self.passed));
        let _ = writeln!(
            out,
            "  n = {}, dim g = {}, N = {}, D = {}, Dtest = {}, seed = {}",
            p.n, p.lie_dim, p.truncation, p.max_degree, p.test_degree, p.seed
        );
        for t in &self.tasks {
            let _ = writeln!(out, "\n[{}] {}", verdict(t.passed), t.task);
            if t.task == "centers" {
                center_table(&mut out, &t.summary);
            } else {
                summary_lines(&mut out, &t.summary);
            }
            for f in &t.failures {
                let mut at = Vec::new();
                if let Some(s) = f.sample {
                    at.push(format!("sample {s}"));
                }
                if let Some(d) = f.degree {
                    at.push(format!("degree {d}"));
                }
                if let Some(o) = f.order {
                    at.push(format!("hbar^{o}"));
                }
                let at = if at.is_empty() { String::new() } else { format!(" ({})", at.join(", ")) };
                let _ = writeln!(out, "  FAIL {}{}: {}", f.check, at, f.detail);
            }
        }
        out
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn summary_lines(out: &mut String, summary: &Value) {
    let Value::Object(map) = summary else {
        return;
    };
    for (k, v) in map {
        match v {
            Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
                let items: Vec<String> = items.iter().map(scalar_text).collect();
                let _ = writeln!(out, "  {k}: [{}]", items.join(", "));
            }
            Value::Array(items) => {
                let _ = writeln!(out, "  {k}:");
                for item in items {
                    let _ = writeln!(out, "    - {}", compact(item));
                }
            }
            Value::Object(_) => {
                let _ = writeln!(out, "  {k}: {}", compact(v));
            }
            other => {
                let _ = writeln!(out, "  {k}: {}", scalar_text(other));
            }
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k} = {}", compact(v))).collect();
            parts.join("; ")
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("[{}]", parts.join(", "))
        }
        other => scalar_text(other),
    }
}

fn center_table(out: &mut String, summary: &Value) {
    let _ = writeln!(
        out,
        "  {:>6}  {:>7}  {:>11}  {:>12}  {:>10}",
        "degree", "inv-dim", "poisson-dim", "quantum-rank", "moment-dim"
    );
    if let Some(Value::Array(rows)) = summary.get("rows") {
        for r in rows {
            let get = |k: &str| r.get(k).map(scalar_text).unwrap_or_default();
            let _ = writeln!(
                out,
                "  {:>6}  {:>7}  {:>11}  {:>12}  {:>10}",
                get("degree"),
                get("invariants_dim"),
                get("poisson_dim"),
                get("quantum_rank"),
                get("moment_image_dim")
            );
        }
    }
    if let Value::Object(map) = summary {
        for (k, v) in map {
            if k != "rows" {
                let _ = writeln!(out, "  {k}: {}", compact(v));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn params() -> Parameters {
        Parameters { truncation: 8, max_degree: 8, test_degree: 10, seed: 0, n: 1, lie_dim: 1 }
    }

    #[test]
    fn empty_report_is_valid_and_passes() {
        let r = Report::new("empty", params(), Vec::new());
        assert!(r.passed);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["tasks"], json!([]));
    }

    #[test]
    fn json_keys_are_sorted() {
        let t = TaskReport::new("lift", json!({"zeta": 1, "alpha": 2}), Vec::new());
        let json = Report::new("s", params(), vec![t]).to_json();
        assert!(json.find("\"alpha\"").unwrap() < json.find("\"zeta\"").unwrap());
        assert!(json.find("\"parameters\"").unwrap() < json.find("\"scenario\"").unwrap());
    }

    #[test]
    fn center_table_columns() {
        let summary = json!({"rows": [{"degree": 0, "invariants_dim": 1, "poisson_dim": 1, "quantum_rank": 1, "moment_image_dim": 1}]});
        let text = Report::new("s", params(), vec![TaskReport::new("centers", summary, Vec::new())]).to_text();
        assert!(text.contains("degree  inv-dim  poisson-dim  quantum-rank"));
        assert!(text.contains("[PASS] centers"));
    }

    #[test]
    fn failures_fail_the_report() {
        let f = Failure::new("associativity", "residual").sample(3).order(Some(2));
        let r = Report::new("s", params(), vec![TaskReport::new("axioms", json!({}), vec![f])]);
        assert!(!r.passed);
        assert!(r.to_text().contains("FAIL associativity (sample 3, hbar^2): residual"));
    }
}
