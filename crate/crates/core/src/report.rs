//! Command reports: named values plus pass/fail checks, rendered as text or
//! as a deterministic JSON document.

use std::fmt;

use serde::Serialize;

use crate::rational::{render, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
}

impl Check {
    /// Passes iff `expected == actual`.
    pub fn equal(name: impl Into<String>, expected: &Rational, actual: &Rational) -> Self {
        Check {
            name: name.into(),
            status: Status::from_bool(expected == actual),
            expected: render(expected),
            actual: render(actual),
        }
    }

    /// Compares rendered values.
    pub fn text(name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        Check {
            name: name.into(),
            status: Status::from_bool(expected == actual),
            expected,
            actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub values: Vec<Value>,
    pub checks: Vec<Check>,
    pub overall: Status,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            values: Vec::new(),
            checks: Vec::new(),
            overall: Status::Pass,
        }
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.values.push(Value {
            name: name.into(),
            value: value.into(),
        });
        self
    }

    pub fn rational(&mut self, name: impl Into<String>, value: &Rational) -> &mut Self {
        self.value(name, render(value))
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        if check.status == Status::Fail {
            self.overall = Status::Fail;
        }
        self.checks.push(check);
        self
    }

    /// Sorts checks by name so output does not depend on evaluation order.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.overall = Status::from_bool(self.checks.iter().all(|c| c.status == Status::Pass));
        self
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.command)?;
        for v in &self.values {
            writeln!(f, "  {} = {}", v.name, v.value)?;
        }
        for c in &self.checks {
            if c.status == Status::Pass {
                writeln!(f, "  [pass] {}: {}", c.name, c.actual)?;
            } else {
                writeln!(f, "  [FAIL] {}: expected {}, got {}", c.name, c.expected, c.actual)?;
            }
        }
        writeln!(f, "overall: {}", self.overall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn overall_tracks_checks() {
        let mut r = Report::new("demo");
        r.check(Check::equal("b", &int(0), &int(0)));
        assert!(r.clone().finish().passed());
        r.check(Check::equal("a", &ratio(1, 2), &int(0)));
        let r = r.finish();
        assert!(!r.passed());
        assert_eq!(r.checks[0].name, "a");
        assert_eq!(r.checks[0].expected, "1/2");
    }

    #[test]
    fn json_uses_strings() {
        let mut r = Report::new("demo");
        r.rational("x", &ratio(-5, 4));
        let json = r.finish().to_json();
        assert!(json.contains("\"value\": \"-5/4\""));
        assert!(json.contains("\"overall\": \"pass\""));
    }
}
