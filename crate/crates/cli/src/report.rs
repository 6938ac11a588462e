use serde::Serialize;
use serde_json::{Map, Value};

use arithdisc::numfield::{FieldElement, IntegerElement};
use arithdisc::series::TruncatedSeries;
use arithdisc::{CheckEntry, Verdict};

pub const TOOL: &str = "arithdisc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: Value,
    pub status: Verdict,
    pub entries: Vec<CheckEntry>,
    pub results: Map<String, Value>,
    pub timings: Timings,
}

impl Report {
    pub fn new(scenario: Value, entries: Vec<CheckEntry>, results: Map<String, Value>, elapsed_ms: u128) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            scenario,
            status: status(&entries),
            entries,
            results,
            timings: Timings { elapsed_ms },
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.status)
    }
}

/// Worst entry status: error over fail over undecidable over pass.
pub fn status(entries: &[CheckEntry]) -> Verdict {
    entries.iter().fold(Verdict::Pass, |acc, e| acc.and(e.status))
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail | Verdict::Undecidable => 1,
        Verdict::Error => 2,
    }
}

pub fn rational_strings(e: &FieldElement) -> Value {
    Value::Array(e.0.iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn integer_strings(e: &IntegerElement) -> Value {
    Value::Array(e.0.iter().map(|c| Value::String(c.to_string())).collect())
}

/// Coefficients as field elements in integral-basis coordinates.
pub fn series_value(s: &TruncatedSeries) -> Value {
    field_elements(&s.field_coeffs())
}

pub fn field_elements(v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(rational_strings).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_worst_entry() {
        let e = |s| CheckEntry::new("x", s, "");
        assert_eq!(exit_code(status(&[])), 0);
        assert_eq!(exit_code(status(&[e(Verdict::Pass), e(Verdict::Undecidable)])), 1);
        assert_eq!(exit_code(status(&[e(Verdict::Undecidable), e(Verdict::Fail)])), 1);
        assert_eq!(exit_code(status(&[e(Verdict::Fail), e(Verdict::Error)])), 2);
    }
}
