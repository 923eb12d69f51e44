//! Named residual checks shared by every verifier.

use serde::{Deserialize, Serialize};

use crate::numerics::PsdCertificate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual ≤ tolerance`. NaN residuals fail.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { name: name.into(), residual, tolerance, pass: residual <= tolerance }
    }

    /// Passes when `residual ≥ threshold` (for checks that expect a defect).
    pub fn at_least(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check { name: name.into(), residual, tolerance: threshold, pass: residual >= threshold }
    }

    /// Residual is the PSD violation `max(0, −λ_min)`.
    pub fn psd(name: impl Into<String>, cert: &PsdCertificate) -> Self {
        Check { name: name.into(), residual: cert.violation(), tolerance: cert.tolerance_used, pass: cert.is_psd }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), residual: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, pass: ok }
    }
}

/// An ordered list of checks; passes iff every member passes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn new() -> Self {
        Checks(Vec::new())
    }

    pub fn push(&mut self, check: Check) {
        self.0.push(check);
    }

    pub fn extend(&mut self, prefix: &str, other: Checks) {
        for mut c in other.0 {
            c.name = format!("{prefix}{}", c.name);
            self.0.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.0.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.0.iter().find(|c| c.name == name)
    }

    /// Residual of the named check.
    ///
    /// Panics if the check does not exist; names are fixed by the producers.
    pub fn residual(&self, name: &str) -> f64 {
        self.get(name).unwrap_or_else(|| panic!("no check named {name:?}")).residual
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.0.iter().filter(|c| !c.pass).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Check> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
