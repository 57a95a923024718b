//! End-to-end check of one instance: identities, module axioms, the
//! annihilator, the solver, and the oracle cross-check.

use std::fmt;

use serde::Serialize;

use crate::io::InstanceFile;
use crate::oracle::{agrees_with_oracle, oracle_solve};
use crate::solver::{check_dichotomy, solve, verify_weight, Dichotomy, SolveError, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this instance, e.g. solving a non-solvable algebra.
    Skip,
    /// Spectrum does not split over the rationals.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SolveResult>,
    pub exit_code: i32,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.exit_code == 0
    }

    /// The first failing check, if any.
    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn dichotomy(&self) -> Option<Dichotomy> {
        self.result.as_ref().map(|r| r.dichotomy)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
                Status::Error => "ERROR",
            };
            write!(f, "{status:<5} {}", c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        write!(f, "exit {}", self.exit_code)
    }
}

struct Builder(Vec<CheckOutcome>);

impl Builder {
    fn push(&mut self, name: &'static str, status: Status, detail: impl Into<String>) {
        self.0.push(CheckOutcome {
            name,
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) -> bool {
        let detail = if ok { String::new() } else { detail.into() };
        self.push(name, if ok { Status::Pass } else { Status::Fail }, detail);
        ok
    }

    fn finish(self, result: Option<SolveResult>) -> VerifyReport {
        let exit_code = if self.0.iter().any(|c| c.status == Status::Error) {
            2
        } else if self.0.iter().any(|c| c.status == Status::Fail) {
            1
        } else {
            0
        };
        VerifyReport {
            checks: self.0,
            result,
            exit_code,
        }
    }
}

/// Runs every check on `inst`. Exit code 0 means all passed, 1 means a
/// violation, 2 means a non-split spectrum.
///
/// An invalid algebra or module stops the run after the failing check. A
/// non-solvable algebra or a zero module skips the solver checks.
pub fn run_verify(inst: &InstanceFile) -> VerifyReport {
    let mut b = Builder(Vec::new());
    let alg = &inst.algebra;
    let m = &inst.module;

    let violations = alg.check_algebra();
    let first = violations.first().map(ToString::to_string).unwrap_or_default();
    if !b.check("check-algebra", violations.is_empty(), first) {
        return b.finish(None);
    }
    let violations = m.check_module();
    let first = violations.first().map(ToString::to_string).unwrap_or_default();
    if !b.check("check-module", violations.is_empty(), first) {
        return b.finish(None);
    }
    let derived = m.check_derived_identities();
    b.check(
        "derived-identities",
        derived.passed(),
        format!("{} of {} instances fail", derived.failures.len(), derived.checked),
    );
    let ann = m.plus_annihilator();
    b.check(
        "annihilator-submodule",
        m.is_submodule(&ann),
        format!("annihilator of dimension {} is not invariant", ann.dim()),
    );

    if m.vdim() == 0 {
        b.push("solve", Status::Skip, "zero module has no weight vector");
        return b.finish(None);
    }
    let result = match solve(alg, m) {
        Ok(r) => r,
        Err(SolveError::NotSolvable) => {
            b.push("solve", Status::Skip, "algebra is not solvable");
            return b.finish(None);
        }
        Err(e @ SolveError::NonSplitSpectrum) => {
            b.push("solve", Status::Error, e.to_string());
            return b.finish(None);
        }
        Err(e) => {
            b.check("solve", false, e.to_string());
            return b.finish(None);
        }
    };
    b.push("solve", Status::Pass, format!("trace {}", trace(&result)));
    b.check(
        "verify-weight",
        !result.v.is_zero() && verify_weight(m, &result.v, &result.weight),
        "solver vector is not a common weight vector",
    );
    let dichotomy = check_dichotomy(&result.weight);
    b.check(
        "dichotomy",
        dichotomy == result.dichotomy && dichotomy != Dichotomy::Violation,
        format!("weight gives {dichotomy}, result says {}", result.dichotomy),
    );
    match oracle_solve(m) {
        Ok(entries) => {
            b.check(
                "oracle",
                agrees_with_oracle(&entries, &result.v, &result.weight),
                format!("no oracle entry among {} matches", entries.len()),
            );
        }
        Err(e) => b.push("oracle", Status::Error, e.to_string()),
    }
    b.finish(Some(result))
}

fn trace(r: &SolveResult) -> String {
    if r.branch_trace.is_empty() {
        return "(base)".into();
    }
    r.branch_trace.iter().map(|t| t.tag()).collect::<Vec<_>>().join(", ")
}
