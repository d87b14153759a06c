//! Verdict plumbing shared by the brute-force verification passes.

use std::fmt;

/// Outcome of a verification pass.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The pass was not run, typically because it would exceed the
    /// enumeration budget.
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

/// Result of one named verification pass: verdict, number of cases checked,
/// and the first counterexample when the verdict is [`Verdict::Fail`].
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub verdict: Verdict,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn pass(name: &'static str, cases: u64) -> CheckReport {
        CheckReport {
            name,
            verdict: Verdict::Pass,
            cases,
            counterexample: None,
        }
    }

    pub fn fail(name: &'static str, cases: u64, counterexample: String) -> CheckReport {
        CheckReport {
            name,
            verdict: Verdict::Fail,
            cases,
            counterexample: Some(counterexample),
        }
    }

    pub fn skipped(name: &'static str, reason: String) -> CheckReport {
        CheckReport {
            name,
            verdict: Verdict::Skipped,
            cases: 0,
            counterexample: Some(reason),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
