//! Verification reports: a list of named checks with a status each.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Warn,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Warn => "warn",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: Status,
    pub detail: String,
    /// Short label of the statement being checked.
    pub paper_ref: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub warn: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        description: impl Into<String>,
        status: Status,
        detail: impl Into<String>,
        label: impl Into<String>,
    ) {
        match status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skip => self.summary.skip += 1,
            Status::Warn => self.summary.warn += 1,
        }
        self.checks.push(Check {
            id: id.into(),
            description: description.into(),
            status,
            detail: detail.into(),
            paper_ref: label.into(),
        });
    }

    /// Records `pass` when `ok`, `fail` otherwise.
    pub fn check(
        &mut self,
        id: impl Into<String>,
        description: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        label: impl Into<String>,
    ) -> bool {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, description, status, detail, label);
        ok
    }

    /// Appends every check of `other`, prefixing ids.
    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.push(c.id, c.description, c.status, c.detail, c.paper_ref);
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Fixed-width table, one check per line.
    pub fn to_table(&self) -> String {
        let idw = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("suite: {}\n", self.suite);
        out.push_str(&format!("{:<idw$}  {:<6}  {}\n", "id", "status", "description"));
        for c in &self.checks {
            out.push_str(&format!("{:<idw$}  {:<6}  {}\n", c.id, c.status.to_string(), c.description));
            if !c.detail.is_empty() && c.status != Status::Pass {
                for line in c.detail.lines() {
                    out.push_str(&format!("{:<idw$}          {}\n", "", line));
                }
            }
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skip, {} warn\n",
            self.summary.pass, self.summary.fail, self.summary.skip, self.summary.warn
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_json_round_trip() {
        let mut r = Report::new("demo");
        r.check("a", "first", true, "", "label");
        r.push("b", "second", Status::Skip, "no data", "label");
        r.check("c", "third", false, "boom", "label");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skip: 1, warn: 0 });
        assert!(!r.passed());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"status\": \"fail\""));
        assert!(r.to_table().contains("boom"));
    }
}
