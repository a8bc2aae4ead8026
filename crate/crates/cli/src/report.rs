use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Within tolerance, but the underlying computation reported a caveat
    /// (non-convergence of a reference sum, polytope disagreement).
    Flagged,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Flagged => "FLAG",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: &'static str,
    /// The invariant the check exercises.
    pub anchor: &'static str,
    pub status: Status,
    pub defect: f64,
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub flagged: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<String>,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: String, config: RunConfig, fault: Option<String>, checks: Vec<CheckResult>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Flagged => summary.flagged += 1,
                Status::Fail => summary.failed += 1,
            }
        }
        VerificationReport {
            suite,
            seed: config.seed,
            fault,
            config,
            checks,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn summary_line(&self) -> String {
        format!(
            "verify {}: {} passed, {} flagged, {} failed (seed {})",
            self.suite, self.summary.passed, self.summary.flagged, self.summary.failed, self.seed
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let timings = self.checks.iter().any(|c| c.runtime_s.is_some());
        let mut out = String::from("suite,check,status,defect,tolerance,anchor,detail");
        out.push_str(if timings { ",runtime_s\n" } else { "\n" });
        for c in &self.checks {
            let _ = write!(
                out,
                "{},{},{},{:e},{:e},{},{}",
                c.suite,
                c.check,
                c.status.label(),
                c.defect,
                c.tolerance,
                csv_field(c.anchor),
                csv_field(&c.detail)
            );
            if let Some(t) = c.runtime_s {
                let _ = write!(out, ",{t:.3}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.fault {
            let _ = writeln!(out, "fault injected: {f}");
        }
        for c in &self.checks {
            let _ = write!(
                out,
                "[{}] {}/{}: defect {:.2e} (tol {:.1e}) {}",
                c.status.label(),
                c.suite,
                c.check,
                c.defect,
                c.tolerance,
                c.anchor
            );
            if !c.detail.is_empty() {
                let _ = write!(out, "; {}", c.detail);
            }
            if let Some(t) = c.runtime_s {
                let _ = write!(out, " | {t:.3} s");
            }
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn summary_counts() {
        let mk = |status| CheckResult {
            suite: "s",
            check: "c",
            anchor: "a",
            status,
            defect: 0.0,
            tolerance: 1.0,
            detail: String::new(),
            runtime_s: None,
        };
        let r = VerificationReport::new("s".into(), RunConfig::default(), None, vec![mk(Status::Pass), mk(Status::Flagged)]);
        assert!(r.passed());
        let r = VerificationReport::new("s".into(), RunConfig::default(), None, vec![mk(Status::Fail)]);
        assert!(!r.passed());
        assert!(r.to_csv().lines().nth(1).unwrap().starts_with("s,c,FAIL,"));
    }
}
