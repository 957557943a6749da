//! Deterministic JSON reports shared by every checking command.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing could be decided inside the truncation.
    UndecidableRemainder,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub target: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub section: String,
    pub at: String,
    pub residuals: Vec<Residual>,
}

impl Violation {
    pub fn new(section: &str, at: impl Into<String>) -> Self {
        Violation {
            section: section.to_string(),
            at: at.into(),
            residuals: Vec::new(),
        }
    }

    pub fn residual(mut self, target: impl Into<String>, poly: impl ToString) -> Self {
        self.residuals.push(Residual {
            target: target.into(),
            poly: poly.to_string(),
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub counts: Counts,
    pub sections: Vec<Section>,
    pub violations: Vec<Violation>,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            status: Status::UndecidableRemainder,
            counts: Counts::default(),
            sections: Vec::new(),
            violations: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    /// Adds a section whose counts enter the report totals.
    pub fn section(
        &mut self,
        name: &str,
        checked: usize,
        skipped: usize,
        notes: Vec<String>,
        violations: Vec<Violation>,
    ) {
        self.counts.checked += checked;
        self.counts.skipped += skipped;
        self.diagnostic(name, checked, skipped, notes, violations);
    }

    /// Adds a section whose violations count but whose counts stay local.
    pub fn diagnostic(
        &mut self,
        name: &str,
        checked: usize,
        skipped: usize,
        notes: Vec<String>,
        violations: Vec<Violation>,
    ) {
        self.sections.push(Section {
            name: name.to_string(),
            checked,
            skipped,
            violations: violations.len(),
            notes,
        });
        self.violations.extend(violations);
        self.status = if !self.violations.is_empty() {
            Status::Fail
        } else if self.counts.checked > 0 {
            Status::Pass
        } else {
            Status::UndecidableRemainder
        };
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Fail => 1,
            Status::Pass | Status::UndecidableRemainder => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
