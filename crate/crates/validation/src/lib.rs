//! Verdict lines for the acceptance suite in `tests/acceptance.rs`.

use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(id: u8, title: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            id,
            title,
            passed,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {:>2} {status} {}: {}", self.id, self.title, self.detail)
    }

    /// Writes the line straight to stdout so that it shows even when the
    /// test harness captures output, then fails the test on FAIL.
    pub fn conclude(&self) {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "\n{}", self.line());
        let _ = out.flush();
        assert!(self.passed, "{}", self.line());
    }
}
