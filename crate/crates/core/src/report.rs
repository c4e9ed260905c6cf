//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Violated condition, present on every failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Json,
    pub checks: Vec<Check>,
    pub residuals: BTreeMap<String, f64>,
    /// Derived quantities such as `mu`, `kappa`, `tau0`, `t_nk`.
    pub scalars: BTreeMap<String, Json>,
    pub tolerance: f64,
    pub elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Json::is_null")]
    pub details: Json,
}

impl Report {
    pub fn new(command: &str, inputs: Json, tolerance: f64) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            checks: Vec::new(),
            residuals: BTreeMap::new(),
            scalars: BTreeMap::new(),
            tolerance,
            elapsed_ms: 0.0,
            details: Json::Null,
        }
    }

    /// Adds a pass/fail check; `condition` is recorded only on failure.
    pub fn check(&mut self, name: &str, ok: bool, condition: &str) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            verdict: Verdict::from_bool(ok),
            condition: (!ok).then(|| condition.to_string()),
            detail: None,
        });
        self
    }

    pub fn check_detail(&mut self, name: &str, ok: bool, condition: &str, detail: impl Into<String>) -> &mut Self {
        self.check(name, ok, condition);
        self.checks.last_mut().expect("just pushed").detail = Some(detail.into());
        self
    }

    pub fn not_applicable(&mut self, name: &str, detail: &str) -> &mut Self {
        self.checks.push(Check {
            name: name.to_string(),
            verdict: Verdict::NotApplicable,
            condition: None,
            detail: Some(detail.to_string()),
        });
        self
    }

    /// Records an error as a failed check labelled by its condition.
    pub fn error(&mut self, name: &str, e: &Error) -> &mut Self {
        self.check_detail(name, false, e.condition(), e.to_string())
    }

    pub fn residual(&mut self, name: &str, v: f64) -> &mut Self {
        self.residuals.insert(name.to_string(), v);
        self
    }

    pub fn scalar(&mut self, name: &str, v: impl Serialize) -> &mut Self {
        self.scalars.insert(name.to_string(), serde_json::to_value(v).expect("serializable"));
        self
    }

    /// Fail if any check fails; pass otherwise (including when all are N/A).
    pub fn overall(&self) -> Verdict {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Verdict::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    /// Plain-text summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.command, self.overall().label());
        for c in &self.checks {
            let _ = write!(s, "  [{:>4}] {}", c.verdict.label(), c.name);
            if let Some(cond) = &c.condition {
                let _ = write!(s, "  (violates {cond})");
            }
            if let Some(d) = &c.detail {
                let _ = write!(s, "  {d}");
            }
            s.push('\n');
        }
        for (k, v) in &self.scalars {
            let _ = writeln!(s, "  {k} = {}", v);
        }
        for (k, v) in &self.residuals {
            let _ = writeln!(s, "  residual {k} = {v:.3e}");
        }
        let _ = writeln!(s, "  tolerance {:e}, {:.1} ms", self.tolerance, self.elapsed_ms);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_state_and_round_trip() {
        let mut r = Report::new("demo", serde_json::json!({"x": 1}), 1e-10);
        r.not_applicable("cone", "no link differential");
        assert_eq!(r.overall(), Verdict::Pass);
        r.error("build", &Error::NotStable { tau: 1.0 });
        assert_eq!(r.overall(), Verdict::Fail);
        assert_eq!(r.checks[1].condition.as_deref(), Some("psi-stable (tau(psi) < 0)"));
        r.scalar("mu", 0.5).residual("r1", 0.0);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.exit_code(), 1);
    }
}
