//! Check reports with a versioned JSON schema and a plain-text rendering.

use std::time::Instant;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// Passes after recorded corrections to reference forms.
    PassWithDiffs,
    Fail,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self != Status::Fail
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassWithDiffs => "pass-with-diffs",
            Status::Fail => "fail",
        }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::PassWithDiffs, _) | (_, Status::PassWithDiffs) => Status::PassWithDiffs,
            _ => Status::Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// The reference table or identity the check reproduces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status, summary: impl Into<String>) -> Self {
        Self { id: id.into(), reference: None, status, summary: summary.into(), details: Vec::new(), timing_ms: None }
    }

    pub fn pass(id: impl Into<String>, summary: impl Into<String>) -> Self {
        Self::new(id, Status::Pass, summary)
    }

    pub fn fail(id: impl Into<String>, summary: impl Into<String>) -> Self {
        Self::new(id, Status::Fail, summary)
    }

    pub fn with_reference(mut self, r: impl Into<String>) -> Self {
        self.reference = Some(r.into());
        self
    }

    pub fn with_details(mut self, d: Vec<String>) -> Self {
        self.details = d;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = Some(start.elapsed().as_millis() as u64);
        self
    }
}

/// A named two-column table such as computed coproducts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub setup: String,
    pub order: u32,
    pub gamma: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, setup: &str, order: u32, gamma: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            setup: setup.into(),
            order,
            gamma: gamma.into(),
            status: Status::Pass,
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.status = self.status.and(c.status);
        self.checks.push(c);
    }

    pub fn push_table(&mut self, t: Table) {
        self.tables.push(t);
    }

    /// Fold another report's checks and tables in, prefixing ids.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.checks {
            c.id = format!("{}/{}", other.command, c.id);
            self.push(c);
        }
        for mut t in other.tables {
            t.name = format!("{}/{}", other.command, t.name);
            self.tables.push(t);
        }
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    /// Pretty JSON; `timing` controls whether per-check timings appear.
    pub fn to_json(&self, timing: bool) -> String {
        let mut r = self.clone();
        if !timing {
            for c in &mut r.checks {
                c.timing_ms = None;
            }
        }
        serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut out = format!(
            "{} [{}] order {} gamma {}: {}\n",
            self.command,
            self.setup,
            self.order,
            self.gamma,
            self.status.label()
        );
        for c in &self.checks {
            let t = match (timing, c.timing_ms) {
                (true, Some(ms)) => format!(" ({ms} ms)"),
                _ => String::new(),
            };
            out.push_str(&format!("  {:<15} {}: {}{t}\n", c.status.label(), c.id, c.summary));
            if let (Status::Fail, Some(r)) = (c.status, &c.reference) {
                out.push_str(&format!("      reference: {r}\n"));
            }
            for d in &c.details {
                out.push_str(&format!("      {d}\n"));
            }
        }
        for t in &self.tables {
            out.push_str(&format!("  table {}\n", t.name));
            for (a, b) in &t.rows {
                out.push_str(&format!("      {a} = {b}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combines_to_the_worst() {
        let mut r = Report::new("x", "s", 4, "symbolic");
        r.push(Check::pass("a", "ok"));
        assert_eq!(r.status, Status::Pass);
        r.push(Check::new("b", Status::PassWithDiffs, "corrected"));
        assert_eq!(r.status, Status::PassWithDiffs);
        r.push(Check::fail("c", "bad"));
        assert!(!r.passed());
    }

    #[test]
    fn json_without_timing_is_stable() {
        let mut r = Report::new("x", "s", 4, "symbolic");
        r.push(Check::pass("a", "ok").timed(Instant::now()));
        let a = r.to_json(false);
        assert!(!a.contains("timing_ms"));
        assert!(a.contains("\"schema_version\": 1"));
        assert_eq!(a, r.to_json(false));
    }
}
