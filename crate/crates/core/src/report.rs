use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// One asserted comparison inside a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value <= bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value <= bound, detail: None }
    }

    /// Passes when `value >= bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value >= bound, detail: None }
    }

    /// Passes when `value < bound`.
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value < bound, detail: None }
    }

    /// Passes when `value > bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, pass: value > bound, detail: None }
    }

    /// Passes when |value − target| <= tol.
    pub fn equals(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self { name: name.into(), value, bound: target, pass: (value - target).abs() <= tol, detail: None }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self { name: name.into(), value: pass as u8 as f64, bound: 1.0, pass, detail: None }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Record of one verification: both sides, the constant used, the margin and
/// the individual checks that decide the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub checks: Vec<Check>,
    /// Values that are reported but not asserted.
    pub recorded: serde_json::Map<String, serde_json::Value>,
    pub grid: serde_json::Value,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            name: name.into(),
            lhs: None,
            rhs: None,
            constant: None,
            margin: None,
            checks: Vec::new(),
            recorded: serde_json::Map::new(),
            grid: serde_json::Value::Null,
            notes: Vec::new(),
        }
    }

    pub fn sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn record(&mut self, key: &str, v: impl Serialize) {
        self.recorded.insert(key.to_string(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn merge(&mut self, other: VerificationReport) {
        let prefix = other.name.clone();
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        for (k, v) in other.recorded {
            self.recorded.insert(format!("{prefix}/{k}"), v);
        }
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serialises");
        v["pass"] = serde_json::Value::Bool(self.pass());
        v
    }
}
