//! Named deviation measurements collected by the verification suites.

use serde::Serialize;

/// Tolerances shared by the whole crate: `structural` guards algebraic
/// identities (orthonormality, unitarity, trace preservation), `oracle`
/// guards agreement between independent computation routes.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub structural: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-12,
            oracle: 1e-10,
        }
    }
}

/// One named maximum deviation, compared against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The outcome of a verification suite.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.deviation))
    }

    pub fn deviation_of(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.deviation)
    }
}
