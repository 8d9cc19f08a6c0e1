//! JSON problem files: a system, an operator and the expected verdicts.
//!
//! ```json
//! {
//!   "name": "example",
//!   "n": 2,
//!   "fields": ["u", "v"],
//!   "parameters": [],
//!   "V": [["0", "1"], ["1/u^2", "0"]],
//!   "W": ["0", "-2*x"],
//!   "operator": { "kind": "dubrovin-novikov", "g": [["0", "1"], ["1", "0"]] },
//!   "expect": { "operator": true, "compat": true, "oracle": true }
//! }
//! ```
//!
//! `gamma[i][j][k]` is `Γ^{ij}_k`; `alpha` defaults to 1; `c` is required
//! for Ferapontov–Mokhov operators; `w` defaults to the identity.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use symcore::{parse_expression, RationalFunction, VariableContext};

use crate::error::{CoreError, Result};
use crate::geometry::{Geometry, Metric};
use crate::operators::{
    validate_connection, DubrovinNovikov, Ferapontov, FerapontovMokhov, HydroOperator,
};
use crate::systems::QuasilinearSystem;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    DubrovinNovikov,
    Ferapontov,
    FerapontovMokhov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub g: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Vec<String>>>,
}

/// Expected outcomes; absent entries are not checked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Hamiltonianity of the operator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<bool>,
    /// Compatibility verdict; evaluated without the Hamiltonianity
    /// precondition when the operator is not Hamiltonian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compat: Option<bool>,
    /// Anchors of the compatibility conditions expected to fail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    /// Expected input error, by [`error_kind`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<String>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    #[serde(rename = "W")]
    pub w: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_x_in_v: bool,
    pub operator: OperatorSpec,
    #[serde(default)]
    pub expect: Expectations,
}

/// A problem with every expression parsed and the operator's geometry built.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub description: String,
    pub system: QuasilinearSystem,
    pub operator: HydroOperator,
    pub expect: Expectations,
}

/// Short stable name of an error, as used in [`Expectations::error`].
pub fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::Symbolic(_) | CoreError::Parse { .. } => "parse",
        CoreError::DegenerateMetric => "degenerate-metric",
        CoreError::NonConstantMetric => "non-constant-metric",
        CoreError::DimensionMismatch { .. } => "dimension-mismatch",
        CoreError::ForbiddenDependence { .. } => "forbidden-dependence",
        CoreError::ConnectionMismatch { .. } => "connection-mismatch",
        CoreError::OperatorNotHamiltonian(_) => "operator-not-hamiltonian",
        CoreError::JetOrderExceeded { .. } | CoreError::MissingRule(_) => "internal",
        CoreError::Problem(_) => "problem",
        CoreError::UnknownExample(_) => "unknown-example",
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            CoreError::Problem(format!("{e} (line {}, column {})", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn context(&self) -> Result<VariableContext> {
        let ctx = match &self.fields {
            Some(f) => {
                check_len("fields", f.len(), self.n)?;
                VariableContext::new(f, &self.parameters)?
            }
            None => VariableContext::with_default_fields(self.n, &self.parameters)?,
        };
        Ok(ctx)
    }

    pub fn build(&self) -> Result<Problem> {
        let ctx = Arc::new(self.context()?);
        let n = self.n;
        let v = parse_matrix(&ctx, "V", &self.v, n)?;
        let w = parse_vector(&ctx, "W", &self.w, n)?;
        let system = if self.allow_x_in_v {
            QuasilinearSystem::with_explicit_x(ctx.clone(), v, w)?
        } else {
            QuasilinearSystem::new(ctx.clone(), v, w)?
        };
        let op = &self.operator;
        let g = parse_matrix(&ctx, "operator.g", &op.g, n)?;
        let geometry = Geometry::new(Metric::new(ctx.clone(), g)?)?;
        if let Some(gamma) = &op.gamma {
            let t = parse_gamma(&ctx, gamma, n)?;
            validate_connection(&geometry, &t)?;
        }
        let scalar = |field: &str, s: &Option<String>| -> Result<Option<RationalFunction>> {
            s.as_ref().map(|s| parse_one(&ctx, field, s)).transpose()
        };
        let operator = match op.kind {
            OperatorKind::DubrovinNovikov => DubrovinNovikov::new(geometry).into(),
            OperatorKind::Ferapontov => {
                let f = op
                    .f
                    .as_ref()
                    .ok_or_else(|| CoreError::Problem("ferapontov operator needs `f`".into()))?;
                let f = parse_vector(&ctx, "operator.f", f, n)?;
                let alpha = scalar("operator.alpha", &op.alpha)?
                    .unwrap_or_else(|| RationalFunction::one(ctx.len()));
                Ferapontov::new(geometry, alpha, f)?.into()
            }
            OperatorKind::FerapontovMokhov => {
                let c = scalar("operator.c", &op.c)?.ok_or_else(|| {
                    CoreError::Problem("ferapontov-mokhov operator needs `c`".into())
                })?;
                match &op.w {
                    Some(w) => {
                        let w = parse_matrix(&ctx, "operator.w", w, n)?;
                        FerapontovMokhov::with_symmetry(geometry, c, w)?.into()
                    }
                    None => FerapontovMokhov::new(geometry, c)?.into(),
                }
            }
        };
        Ok(Problem {
            name: self.name.clone(),
            description: self.description.clone(),
            system,
            operator,
            expect: self.expect.clone(),
        })
    }
}

fn check_len(what: &str, found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch {
            what: what.into(),
            expected,
            found,
        })
    }
}

fn parse_one(ctx: &VariableContext, field: &str, s: &str) -> Result<RationalFunction> {
    let wrap = |source| CoreError::Parse {
        field: field.to_string(),
        source,
    };
    let e = parse_expression(s, ctx).map_err(wrap)?;
    e.normalize(ctx).map_err(wrap)
}

fn parse_vector(
    ctx: &VariableContext,
    what: &str,
    v: &[String],
    n: usize,
) -> Result<Vec<RationalFunction>> {
    check_len(what, v.len(), n)?;
    v.iter()
        .enumerate()
        .map(|(i, s)| parse_one(ctx, &format!("{what}[{}]", i + 1), s))
        .collect()
}

fn parse_matrix(
    ctx: &VariableContext,
    what: &str,
    m: &[Vec<String>],
    n: usize,
) -> Result<Vec<Vec<RationalFunction>>> {
    check_len(what, m.len(), n)?;
    m.iter()
        .enumerate()
        .map(|(i, row)| parse_vector(ctx, &format!("{what}[{}]", i + 1), row, n))
        .collect()
}

fn parse_gamma(ctx: &VariableContext, gamma: &[Vec<Vec<String>>], n: usize) -> Result<Tensor> {
    let rows: Vec<Vec<Vec<RationalFunction>>> = {
        check_len("operator.gamma", gamma.len(), n)?;
        gamma
            .iter()
            .enumerate()
            .map(|(i, m)| parse_matrix(ctx, &format!("operator.gamma[{}]", i + 1), m, n))
            .collect::<Result<_>>()?
    };
    Ok(Tensor::from_fn("gamma", 2, 1, n, |idx| {
        rows[idx[0]][idx[1]][idx[2]].clone()
    }))
}
