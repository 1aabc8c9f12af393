use num_rational::BigRational;
use serde::{Serialize, Serializer};

/// One named pass/fail verification with a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Serialises an optional exact rational as `"p/q"`.
pub(crate) fn rational_opt<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}
