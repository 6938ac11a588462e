use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Undecidable,
    Fail,
    Error,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Combines two outcomes: errors dominate failures, failures dominate
    /// undecidable results.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Undecidable => "undecidable",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Verdict,
    pub details: String,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, status: Verdict, details: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), status, details: details.into() }
    }

    pub fn check(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        Self::new(name, Verdict::from_bool(ok), details)
    }

    pub fn error(name: impl Into<String>, err: &crate::Error) -> Self {
        Self::new(name, Verdict::Error, err.to_string())
    }
}

/// Overall status of a list of entries. An error counts as a failure.
pub fn overall(entries: &[CheckEntry]) -> Verdict {
    let worst = entries.iter().map(|e| e.status).max().unwrap_or(Verdict::Pass);
    match worst {
        Verdict::Error => Verdict::Fail,
        v => v,
    }
}
