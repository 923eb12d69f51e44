use qsconv::report::Checks;
use qsconv::Error;
use serde::Serialize;
use serde_json::Value;

/// What a command produced before the report envelope is added.
pub enum Outcome {
    Checked { checks: Checks, results: Value, error: Option<String> },
    /// Printed verbatim, exit 0.
    Raw(String),
}

impl Outcome {
    pub fn checked(checks: Checks, results: Value) -> Self {
        Outcome::Checked { checks, results, error: None }
    }
}

/// Overall pass iff every check passes and no pipeline stage aborted.
#[derive(Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub verdict: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Checks,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn new(command: Vec<String>, checks: Checks, results: Value, error: Option<String>, wall: Option<f64>) -> Self {
        let pass = error.is_none() && checks.passed();
        Report { command, verdict: if pass { "pass" } else { "fail" }, pass, error, checks, results, wall_time_s: wall }
    }
}

/// Library errors that mean "the input is well formed but lacks the
/// property being checked". Everything else is an input error.
pub fn property_failure(e: &anyhow::Error) -> Option<Outcome> {
    let lib = e.downcast_ref::<Error>()?;
    let property = matches!(
        lib,
        Error::NotPsd { .. }
            | Error::ExpectationInvalid(_)
            | Error::NotHaar { .. }
            | Error::NotMorphism(_)
            | Error::NotAnAction(_)
            | Error::NotReal { .. }
            | Error::KernelNotPsd { .. }
            | Error::InconsistentAction { .. }
            | Error::NotInner { .. }
            | Error::NoSolution { .. }
            | Error::NotCpc { .. }
            | Error::HomoldFailed { .. }
    );
    property.then(|| Outcome::Checked { checks: Checks::new(), results: Value::Null, error: Some(lib.to_string()) })
}
