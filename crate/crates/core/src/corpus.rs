//! Bundled example problems and an evaluator that compares every route
//! against the recorded expectations.

use serde::Serialize;

use crate::compat::check_compatibility_unchecked;
use crate::covering::{oracle_check, ResidualEntry};
use crate::error::{CoreError, Result};
use crate::problem::{error_kind, Problem, ProblemFile};
use crate::report::CheckReport;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $name, ".json")))),*]
    };
}

/// `(name, json)` for every bundled example, sorted by name.
pub const BUNDLED: &[(&str, &str)] = bundled![
    "astigmatism_P",
    "astigmatism_P_alpha1",
    "astigmatism_P_f10",
    "astigmatism_Q",
    "astigmatism_Q_perturbed",
    "chaplygin_FM",
    "chaplygin_FM_wrong_c",
    "chaplygin_FM_xdep",
    "degenerate_metric",
    "exam1_A",
    "exam1_B",
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn lookup(name: &str) -> Result<ProblemFile> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CoreError::UnknownExample(name.to_string()))?;
    ProblemFile::from_json(text)
}

/// Every route evaluated on one problem.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub operator: CheckReport,
    /// Evaluated without the Hamiltonianity precondition.
    pub compat: CheckReport,
    pub oracle_passed: bool,
    pub oracle_residual: Vec<ResidualEntry>,
    pub oracle_warnings: Vec<String>,
}

impl Evaluation {
    /// Local conditions and the oracle agree. Only meaningful when the
    /// operator is Hamiltonian.
    pub fn routes_agree(&self) -> bool {
        self.compat.passed == self.oracle_passed
    }
}

pub fn evaluate(problem: &Problem) -> Result<Evaluation> {
    let operator = problem.operator.check_hamiltonian();
    let compat = check_compatibility_unchecked(&problem.system, &problem.operator)?;
    let oracle = oracle_check(&problem.system, &problem.operator)?;
    Ok(Evaluation {
        operator,
        compat,
        oracle_passed: oracle.passed,
        oracle_residual: oracle.residual.entries(),
        oracle_warnings: oracle.residual.warnings().to_vec(),
    })
}

/// Result of running one problem against its expectations.
#[derive(Debug, Clone, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub evaluation: Option<Evaluation>,
    pub error: Option<String>,
    /// Human-readable expectation mismatches; empty when the case passes.
    pub mismatches: Vec<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn run_case(file: &ProblemFile) -> CaseOutcome {
    let expect = &file.expect;
    let mut mismatches = Vec::new();
    let result = file.build().and_then(|p| evaluate(&p));
    let (evaluation, error) = match result {
        Ok(ev) => (Some(ev), None),
        Err(e) => {
            let kind = error_kind(&e);
            match &expect.error {
                Some(want) if want == kind => {}
                Some(want) => {
                    mismatches.push(format!("expected error `{want}`, got `{kind}`: {e}"))
                }
                None => mismatches.push(format!("unexpected error `{kind}`: {e}")),
            }
            return CaseOutcome {
                name: file.name.clone(),
                evaluation: None,
                error: Some(e.to_string()),
                mismatches,
            };
        }
    };
    let ev = evaluation
        .as_ref()
        .expect("evaluation present without error");
    if let Some(want) = &expect.error {
        mismatches.push(format!("expected error `{want}`, got none"));
    }
    let mut check = |what: &str, want: Option<bool>, got: bool| {
        if let Some(want) = want {
            if want != got {
                mismatches.push(format!(
                    "{what}: expected {}, got {}",
                    verdict(want),
                    verdict(got)
                ));
            }
        }
    };
    check("operator", expect.operator, ev.operator.passed);
    check("compat", expect.compat, ev.compat.passed);
    check("oracle", expect.oracle, ev.oracle_passed);
    if let Some(want) = &expect.failed {
        let got = ev.compat.failed();
        if got != want.iter().map(String::as_str).collect::<Vec<_>>() {
            mismatches.push(format!("failed conditions: expected {want:?}, got {got:?}"));
        }
    }
    if ev.operator.passed && !ev.routes_agree() {
        mismatches.push(format!(
            "routes disagree: conditions {}, oracle {}",
            verdict(ev.compat.passed),
            verdict(ev.oracle_passed)
        ));
    }
    CaseOutcome {
        name: file.name.clone(),
        evaluation,
        error,
        mismatches,
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

/// Runs every bundled example. An empty corpus is an error so that a broken
/// build cannot report success vacuously.
pub fn run_corpus() -> Result<Vec<CaseOutcome>> {
    if BUNDLED.is_empty() {
        return Err(CoreError::Problem("corpus is empty".into()));
    }
    BUNDLED
        .iter()
        .map(|(_, text)| ProblemFile::from_json(text).map(|f| run_case(&f)))
        .collect()
}
