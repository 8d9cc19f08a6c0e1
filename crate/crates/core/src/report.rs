//! Condition-by-condition verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};
use symcore::RationalFunction;

use crate::tensor::Tensor;

/// One nonzero residual component, already rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub component: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    /// Stable identifier of the condition within its theorem, e.g. `local/3`.
    pub anchor: String,
    pub residuals: Vec<Residual>,
    pub passed: bool,
}

impl ConditionResult {
    pub fn from_tensor(name: &str, anchor: &str, t: &Tensor, names: &[&str]) -> Self {
        let residuals: Vec<Residual> = t
            .nonzero()
            .map(|(idx, v)| Residual {
                component: t.index_name(&idx),
                value: v.display_with(names),
            })
            .collect();
        ConditionResult {
            name: name.into(),
            anchor: anchor.into(),
            passed: residuals.is_empty(),
            residuals,
        }
    }

    pub fn from_residuals<I>(name: &str, anchor: &str, items: I, names: &[&str]) -> Self
    where
        I: IntoIterator<Item = (String, RationalFunction)>,
    {
        let residuals: Vec<Residual> = items
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(component, v)| Residual {
                component,
                value: v.display_with(names),
            })
            .collect();
        ConditionResult {
            name: name.into(),
            anchor: anchor.into(),
            passed: residuals.is_empty(),
            residuals,
        }
    }

    /// A condition whose outcome is decided elsewhere, with a free-form
    /// explanation as the single residual when it fails.
    pub fn verdict(name: &str, anchor: &str, passed: bool, detail: Option<String>) -> Self {
        ConditionResult {
            name: name.into(),
            anchor: anchor.into(),
            residuals: match (passed, detail) {
                (false, Some(d)) => vec![Residual {
                    component: "-".into(),
                    value: d,
                }],
                _ => Vec::new(),
            },
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub title: String,
    pub conditions: Vec<ConditionResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(title: &str) -> Self {
        CheckReport {
            title: title.into(),
            conditions: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, c: ConditionResult) {
        self.passed &= c.passed;
        self.conditions.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn warn(&mut self, s: impl Into<String>) {
        self.warnings.push(s.into());
    }

    pub fn condition(&self, anchor: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.anchor == anchor)
    }

    /// Anchors of the failed conditions, in report order.
    pub fn failed(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.anchor.as_str())
            .collect()
    }

    /// Overall verdict recomputed from the rows.
    pub fn recompute(&mut self) {
        self.passed = self.conditions.iter().all(|c| c.passed);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.conditions {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "  [{mark}] {} ({})", c.name, c.anchor)?;
            for r in &c.residuals {
                writeln!(f, "         {} = {}", r.component, r.value)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        write!(
            f,
            "  overall: {}",
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}
