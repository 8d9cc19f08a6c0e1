//! Command implementations and report rendering for the `hamcheck` binary.

use std::fmt::Write as _;
use std::path::Path;

use hamcheck_core::compat::check_compatibility;
use hamcheck_core::corpus::{self, CaseOutcome};
use hamcheck_core::covering::{oracle_check, ResidualEntry};
use hamcheck_core::error::CoreError;
use hamcheck_core::problem::{error_kind, Problem, ProblemFile};
use hamcheck_core::report::{CheckReport, ConditionResult};
use serde::{Deserialize, Serialize};

/// Overall outcome of a command; determines the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    ConditionsFailed,
    InputError,
    /// The two decision routes disagree, or the engine failed internally.
    Inconsistent,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::ConditionsFailed => 1,
            Status::InputError => 2,
            Status::Inconsistent => 3,
        }
    }

    fn from_verdict(passed: bool) -> Self {
        if passed {
            Status::Pass
        } else {
            Status::ConditionsFailed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemHeader {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseLine {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compat: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

impl From<&CaseOutcome> for CaseLine {
    fn from(c: &CaseOutcome) -> Self {
        let ev = c.evaluation.as_ref();
        CaseLine {
            name: c.name.clone(),
            passed: c.passed(),
            operator: ev.map(|e| e.operator.passed),
            compat: ev.map(|e| e.compat.passed),
            oracle: ev.map(|e| e.oracle_passed),
            error: c.error.clone(),
            mismatches: c.mismatches.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleLine {
    pub name: String,
    pub description: String,
}

/// Machine-readable result of one command. The text form is derived from it,
/// so both renderings carry the same verdicts and residual strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderedReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemHeader>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<CheckReport>,
    /// Nonzero covering residual coefficients, when the oracle ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<ResidualEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<ExampleLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub status: Status,
}

impl RenderedReport {
    fn new(command: &str) -> Self {
        RenderedReport {
            command: command.into(),
            problem: None,
            sections: Vec::new(),
            residual: None,
            cases: Vec::new(),
            examples: Vec::new(),
            error: None,
            status: Status::Pass,
        }
    }

    fn fail_with(mut self, e: &CoreError) -> Self {
        let kind = error_kind(e);
        self.status = match e {
            CoreError::OperatorNotHamiltonian(report) => {
                self.sections.push((**report).clone());
                Status::ConditionsFailed
            }
            CoreError::JetOrderExceeded { .. } | CoreError::MissingRule(_) => Status::Inconsistent,
            _ => Status::InputError,
        };
        self.error = Some(ErrorInfo {
            kind: kind.into(),
            message: e.to_string(),
        });
        self
    }

    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self, style: Style) -> String {
        let mut out = String::new();
        if let Some(p) = &self.problem {
            let _ = writeln!(out, "problem: {}", p.name);
            if !p.description.is_empty() {
                let _ = writeln!(out, "  {}", p.description);
            }
            out.push('\n');
        }
        for s in &self.sections {
            render_section(&mut out, s, style);
            out.push('\n');
        }
        for c in &self.cases {
            render_case(&mut out, c, style);
        }
        if !self.cases.is_empty() {
            let ok = self.cases.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "corpus: {ok}/{} as expected", self.cases.len());
        }
        let width = self
            .examples
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(0);
        for e in &self.examples {
            let _ = writeln!(out, "{:width$}  {}", e.name, e.description);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error ({}): {}", e.kind, e.message);
        }
        if self.examples.is_empty() {
            let _ = writeln!(
                out,
                "result: {} (exit {})",
                style.status(self.status),
                self.exit_code()
            );
        }
        out
    }
}

/// ANSI styling of verdict marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub const PLAIN: Style = Style { color: false };

    fn paint(self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn mark(self, passed: bool) -> String {
        if passed {
            self.paint("32", "pass")
        } else {
            self.paint("31;1", "FAIL")
        }
    }

    fn status(self, s: Status) -> String {
        match s {
            Status::Pass => self.paint("32", "pass"),
            Status::ConditionsFailed => self.paint("31;1", "conditions failed"),
            Status::InputError => self.paint("33;1", "input error"),
            Status::Inconsistent => self.paint("35;1", "internal inconsistency"),
        }
    }
}

fn render_section(out: &mut String, r: &CheckReport, style: Style) {
    let _ = writeln!(out, "{}", r.title);
    for c in &r.conditions {
        let _ = writeln!(
            out,
            "  [{}] {} ({})",
            style.mark(c.passed),
            c.name,
            c.anchor
        );
        for res in &c.residuals {
            let _ = writeln!(out, "         {} = {}", res.component, res.value);
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    let _ = writeln!(out, "  overall: {}", style.mark(r.passed));
}

fn render_case(out: &mut String, c: &CaseLine, style: Style) {
    let verdict = |b: Option<bool>| match b {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "-",
    };
    let _ = write!(out, "[{}] {}", style.mark(c.passed), c.name);
    match &c.error {
        Some(e) => {
            let _ = writeln!(out, ": error: {e}");
        }
        None => {
            let _ = writeln!(
                out,
                ": operator {}, compat {}, oracle {}",
                verdict(c.operator),
                verdict(c.compat),
                verdict(c.oracle)
            );
        }
    }
    for m in &c.mismatches {
        let _ = writeln!(out, "       {m}");
    }
}

/// Reads a problem from a file path, falling back to a bundled example name.
pub fn load_problem(input: &str) -> Result<ProblemFile, CoreError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Problem(format!("cannot read {input}: {e}")))?;
        return ProblemFile::from_json(&text);
    }
    corpus::lookup(input).map_err(|_| {
        CoreError::Problem(format!(
            "`{input}` is neither a readable file nor a bundled example"
        ))
    })
}

fn with_problem(
    command: &str,
    input: &str,
    body: impl FnOnce(&mut RenderedReport, &Problem) -> Result<(), CoreError>,
) -> RenderedReport {
    let mut report = RenderedReport::new(command);
    let file = match load_problem(input) {
        Ok(f) => f,
        Err(e) => return report.fail_with(&e),
    };
    report.problem = Some(ProblemHeader {
        name: file.name.clone(),
        description: file.description.clone(),
    });
    match file.build().and_then(|p| body(&mut report, &p)) {
        Ok(()) => report,
        Err(e) => report.fail_with(&e),
    }
}

pub fn cmd_check_operator(input: &str) -> RenderedReport {
    with_problem("check-operator", input, |report, p| {
        let r = p.operator.check_hamiltonian();
        report.status = Status::from_verdict(r.passed);
        report.sections.push(r);
        Ok(())
    })
}

pub fn cmd_check_compat(input: &str, oracle: bool) -> RenderedReport {
    with_problem("check-compat", input, |report, p| {
        let compat = check_compatibility(&p.system, &p.operator)?;
        report.status = Status::from_verdict(compat.passed);
        let compat_passed = compat.passed;
        report.sections.push(compat);
        if oracle {
            let outcome = push_oracle(report, p)?;
            let agree = outcome == compat_passed;
            let mut cross = CheckReport::new("Cross-check of the two decision routes");
            cross.push(ConditionResult::verdict(
                "geometric conditions and covering oracle agree",
                "oracle/agreement",
                agree,
                Some(format!(
                    "conditions {}, oracle {}",
                    if compat_passed { "pass" } else { "fail" },
                    if outcome { "pass" } else { "fail" }
                )),
            ));
            report.sections.push(cross);
            if !agree {
                report.status = Status::Inconsistent;
            }
        }
        Ok(())
    })
}

pub fn cmd_oracle(input: &str) -> RenderedReport {
    with_problem("oracle", input, |report, p| {
        let passed = push_oracle(report, p)?;
        if !p.operator.check_hamiltonian().passed {
            if let Some(s) = report.sections.last_mut() {
                s.warn("the operator is not Hamiltonian; a vanishing residual does not certify compatibility");
            }
        }
        report.status = Status::from_verdict(passed);
        Ok(())
    })
}

/// Runs the covering oracle, appends its section and residual, returns its verdict.
fn push_oracle(report: &mut RenderedReport, p: &Problem) -> Result<bool, CoreError> {
    let outcome = oracle_check(&p.system, &p.operator)?;
    let mut section =
        CheckReport::new("Covering oracle: linearization applied to the lifted operator");
    for row in outcome.residual.rows() {
        section.push(row);
    }
    for w in outcome.residual.warnings() {
        section.warn(w.clone());
    }
    report.sections.push(section);
    report.residual = Some(outcome.residual.entries());
    Ok(outcome.passed)
}

pub fn cmd_corpus() -> RenderedReport {
    let mut report = RenderedReport::new("corpus");
    match corpus::run_corpus() {
        Ok(cases) => {
            report.cases = cases.iter().map(CaseLine::from).collect();
            let disagree = cases.iter().any(|c| {
                c.evaluation
                    .as_ref()
                    .is_some_and(|e| e.operator.passed && !e.routes_agree())
            });
            report.status = if disagree {
                Status::Inconsistent
            } else {
                Status::from_verdict(cases.iter().all(CaseOutcome::passed))
            };
            report
        }
        Err(e) => report.fail_with(&e),
    }
}

pub fn cmd_list_examples() -> RenderedReport {
    let mut report = RenderedReport::new("list-examples");
    for (name, _) in corpus::BUNDLED {
        match corpus::lookup(name) {
            Ok(f) => report.examples.push(ExampleLine {
                name: f.name,
                description: f.description,
            }),
            Err(e) => return report.fail_with(&e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let codes: Vec<u8> = [
            Status::Pass,
            Status::ConditionsFailed,
            Status::InputError,
            Status::Inconsistent,
        ]
        .iter()
        .map(|s| s.exit_code())
        .collect();
        assert_eq!(codes, [0, 1, 2, 3]);
    }

    #[test]
    fn operator_reports_for_bundled_examples() {
        assert_eq!(cmd_check_operator("astigmatism_Q").status, Status::Pass);
        assert_eq!(cmd_check_operator("astigmatism_P").status, Status::Pass);
        let r = cmd_check_operator("degenerate_metric");
        assert_eq!(r.status, Status::InputError);
        assert_eq!(r.error.unwrap().kind, "degenerate-metric");
    }

    #[test]
    fn compat_with_oracle_adds_agreement_row() {
        let r = cmd_check_compat("exam1_B", true);
        assert_eq!(r.status, Status::Pass);
        let last = r.sections.last().unwrap();
        assert!(last.condition("oracle/agreement").unwrap().passed);
        assert_eq!(r.residual.as_deref(), Some(&[][..]));

        let r = cmd_check_compat("astigmatism_Q_perturbed", true);
        assert_eq!(r.status, Status::ConditionsFailed);
        assert_eq!(r.sections[0].failed(), ["local/3", "local/4"]);
        assert!(r.sections.last().unwrap().passed);
        assert!(!r.residual.unwrap().is_empty());
    }

    #[test]
    fn non_hamiltonian_operator_is_a_condition_failure() {
        let r = cmd_check_compat("astigmatism_P_f10", false);
        assert_eq!(r.status, Status::ConditionsFailed);
        assert_eq!(r.error.as_ref().unwrap().kind, "operator-not-hamiltonian");
        assert!(!r.sections[0].passed);
    }

    #[test]
    fn unknown_input_is_an_input_error() {
        let r = cmd_oracle("no/such/file.json");
        assert_eq!(r.status, Status::InputError);
        assert!(r.problem.is_none());
    }

    #[test]
    fn plain_text_has_no_escape_codes() {
        let r = cmd_check_compat("astigmatism_Q_perturbed", true);
        let plain = r.to_text(Style::PLAIN);
        assert!(!plain.contains('\x1b'));
        assert!(plain.contains("[FAIL]"));
        assert!(plain.ends_with("result: conditions failed (exit 1)\n"));
        assert!(r
            .to_text(Style { color: true })
            .contains("\x1b[31;1mFAIL\x1b[0m"));
    }
}
