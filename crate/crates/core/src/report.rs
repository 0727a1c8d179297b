//! Verification reports: named checks with pass/fail/skipped status.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skipped, witness: Some(why.into()) }
    }

    /// Pass if `witness` is `None`, otherwise fail with it.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    pub fn from_result<T>(name: impl Into<String>, r: &crate::Result<T>) -> Self {
        match r {
            Ok(_) => Self::pass(name),
            Err(e) => Self::fail(name, e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// A command's report. `timing` is kept apart so that two runs with the same
/// configuration produce identical JSON once it is removed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    pub timing: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Self { schema: 1, command: command.into(), config, checks: Vec::new(), output: None, timing: BTreeMap::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    /// Run `f`, record its checks (prefixed) and its wall time.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        *self.timing.entry(label.to_string()).or_default() += t.elapsed().as_secs_f64();
        out
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timing field removed.
    pub fn to_json_stable(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.command);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            s.push_str(&format!("  [{tag}] {}", c.name));
            if let Some(w) = &c.witness {
                s.push_str(&format!(" -- {w}"));
            }
            s.push('\n');
        }
        s
    }
}
