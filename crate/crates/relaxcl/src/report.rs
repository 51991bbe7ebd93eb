use serde::Serialize;

/// One checked identity: the measured residual, the threshold it was held to,
/// and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub identity: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Residual {
    /// Residual that passes when `value <= threshold`.
    pub fn at_most(identity: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { identity: identity.into(), value, threshold, pass: value <= threshold }
    }

    /// Residual that passes when `value >= threshold`.
    pub fn at_least(identity: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { identity: identity.into(), value, threshold, pass: value >= threshold }
    }
}

impl Residual {
    /// Residual that passes when `value < threshold`.
    pub fn below(identity: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { identity: identity.into(), value, threshold, pass: value < threshold }
    }
}

pub fn all_pass(rows: &[Residual]) -> bool {
    rows.iter().all(|r| r.pass)
}
