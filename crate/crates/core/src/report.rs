//! Verification reports shared by the checkers and the command line.

use serde::{Deserialize, Serialize};

/// One violated law instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub law: String,
    pub sample: String,
    pub indices: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Number of individual identities compared.
    pub checked: usize,
    pub violations: Vec<ReportEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Record one comparison; a mismatch becomes an entry.
    pub fn compare(
        &mut self,
        law: &str,
        sample: &str,
        indices: &[usize],
        equal: bool,
        lhs: impl FnOnce() -> String,
        rhs: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !equal {
            self.violations.push(ReportEntry {
                law: law.to_string(),
                sample: sample.to_string(),
                indices: indices.to_vec(),
                lhs: lhs(),
                rhs: rhs(),
            });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed(),
            "checked": self.checked,
            "violations": self.violations,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} ({} identities checked, {} violated)\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.violations.len()
        );
        for v in &self.violations {
            out.push_str(&format!(
                "  {} [{}] at {:?}: {} != {}\n",
                v.law, v.sample, v.indices, v.lhs, v.rhs
            ));
        }
        out
    }
}
