use alloc::string::String;

/// One named numerical verification with its residual and threshold.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
        }
    }
}

/// Largest residual in a set of checks.
pub fn worst(checks: &[Check]) -> f64 {
    checks.iter().fold(0.0, |m, c| m.max(c.residual))
}
