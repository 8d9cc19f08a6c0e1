//! First-order Hamiltonian operators of hydrodynamic type and their
//! Hamiltonianity criteria.
//!
//! All three classes share a local part `g^{ij}∂_x + Γ^{ij}_k u^k_x` with the
//! Levi-Civita `Γ^{ij}_k` of `g`; they differ in the nonlocal tail:
//!
//! * Dubrovin–Novikov: none;
//! * Ferapontov: `α f^i ∂_x^{-1} f^j` with `f = f(u)`;
//! * Ferapontov–Mokhov: `c φ^i ∂_x^{-1} φ^j` with `φ^i = w^i_j u^j_x`.

use std::sync::Arc;

use symcore::RationalFunction;

use crate::error::{CoreError, Result};
use crate::geometry::{is_constant_in_base, Geometry, CURVATURE_CONVENTION};
use crate::report::{CheckReport, ConditionResult};
use crate::tensor::{identity, Matrix, Tensor};

#[derive(Debug, Clone)]
pub struct DubrovinNovikov {
    geometry: Arc<Geometry>,
}

impl DubrovinNovikov {
    pub fn new(geometry: Arc<Geometry>) -> Self {
        DubrovinNovikov { geometry }
    }

    /// Accepts an explicit `Γ^{ij}_k` only if it equals the one derived from
    /// `g`.
    pub fn with_connection(geometry: Arc<Geometry>, gamma: &Tensor) -> Result<Self> {
        validate_connection(&geometry, gamma)?;
        Ok(Self::new(geometry))
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }
}

#[derive(Debug, Clone)]
pub struct Ferapontov {
    geometry: Arc<Geometry>,
    alpha: RationalFunction,
    f: Vec<RationalFunction>,
}

impl Ferapontov {
    /// `α` must be free of `x` and the fields, `f` free of `x`.
    pub fn new(
        geometry: Arc<Geometry>,
        alpha: RationalFunction,
        f: Vec<RationalFunction>,
    ) -> Result<Self> {
        let ctx = geometry.ctx().clone();
        if !is_constant_in_base(&alpha, &ctx) {
            return Err(CoreError::ForbiddenDependence {
                what: "alpha".into(),
                depends_on: "x or the fields".into(),
            });
        }
        if f.len() != geometry.n() {
            return Err(CoreError::DimensionMismatch {
                what: "f".into(),
                expected: geometry.n(),
                found: f.len(),
            });
        }
        if f.iter().any(|e| e.depends_on(ctx.x().0)) {
            return Err(CoreError::ForbiddenDependence {
                what: "f".into(),
                depends_on: "x".into(),
            });
        }
        Ok(Ferapontov { geometry, alpha, f })
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn alpha(&self) -> &RationalFunction {
        &self.alpha
    }

    pub fn f(&self) -> &[RationalFunction] {
        &self.f
    }

    /// The local part alone.
    pub fn local(&self) -> DubrovinNovikov {
        DubrovinNovikov::new(self.geometry.clone())
    }

    /// `α f^i ∂_x^{-1} f^j` vanishes identically.
    pub fn tail_vanishes(&self) -> bool {
        self.alpha.is_zero() || self.f.iter().all(RationalFunction::is_zero)
    }
}

#[derive(Debug, Clone)]
pub struct FerapontovMokhov {
    geometry: Arc<Geometry>,
    c: RationalFunction,
    w: Matrix,
}

impl FerapontovMokhov {
    /// Tail `c u^i_x ∂_x^{-1} u^j_x`.
    pub fn new(geometry: Arc<Geometry>, c: RationalFunction) -> Result<Self> {
        let w = identity(geometry.n(), geometry.ctx().len());
        Self::with_symmetry(geometry, c, w)
    }

    /// Tail `c φ^i ∂_x^{-1} φ^j` with `φ^i = w^i_j u^j_x`; `w` free of `x`.
    pub fn with_symmetry(geometry: Arc<Geometry>, c: RationalFunction, w: Matrix) -> Result<Self> {
        let ctx = geometry.ctx().clone();
        if !is_constant_in_base(&c, &ctx) {
            return Err(CoreError::ForbiddenDependence {
                what: "c".into(),
                depends_on: "x or the fields".into(),
            });
        }
        crate::geometry::check_square("w", &w, geometry.n())?;
        if w.iter().flatten().any(|e| e.depends_on(ctx.x().0)) {
            return Err(CoreError::ForbiddenDependence {
                what: "w".into(),
                depends_on: "x".into(),
            });
        }
        Ok(FerapontovMokhov { geometry, c, w })
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn c(&self) -> &RationalFunction {
        &self.c
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn local(&self) -> DubrovinNovikov {
        DubrovinNovikov::new(self.geometry.clone())
    }
}

#[derive(Debug, Clone)]
pub enum HydroOperator {
    DubrovinNovikov(DubrovinNovikov),
    Ferapontov(Ferapontov),
    FerapontovMokhov(FerapontovMokhov),
}

impl HydroOperator {
    pub fn geometry(&self) -> &Arc<Geometry> {
        match self {
            HydroOperator::DubrovinNovikov(op) => op.geometry(),
            HydroOperator::Ferapontov(op) => op.geometry(),
            HydroOperator::FerapontovMokhov(op) => op.geometry(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            HydroOperator::DubrovinNovikov(_) => "dubrovin-novikov",
            HydroOperator::Ferapontov(_) => "ferapontov",
            HydroOperator::FerapontovMokhov(_) => "ferapontov-mokhov",
        }
    }

    pub fn check_hamiltonian(&self) -> CheckReport {
        match self {
            HydroOperator::DubrovinNovikov(op) => check_dn_hamiltonian(op),
            HydroOperator::Ferapontov(op) => check_ferapontov_hamiltonian(op),
            HydroOperator::FerapontovMokhov(op) => check_fm_hamiltonian(op),
        }
    }
}

impl From<DubrovinNovikov> for HydroOperator {
    fn from(op: DubrovinNovikov) -> Self {
        HydroOperator::DubrovinNovikov(op)
    }
}

impl From<Ferapontov> for HydroOperator {
    fn from(op: Ferapontov) -> Self {
        HydroOperator::Ferapontov(op)
    }
}

impl From<FerapontovMokhov> for HydroOperator {
    fn from(op: FerapontovMokhov) -> Self {
        HydroOperator::FerapontovMokhov(op)
    }
}

/// Errors unless `gamma` equals the Levi-Civita `Γ^{ij}_k` of the metric.
pub fn validate_connection(geometry: &Geometry, gamma: &Tensor) -> Result<()> {
    let n = geometry.n();
    if (gamma.upper(), gamma.lower(), gamma.n()) != (2, 1, n) {
        return Err(CoreError::DimensionMismatch {
            what: "gamma".into(),
            expected: n * n * n,
            found: gamma.n().pow(gamma.rank() as u32),
        });
    }
    let derived = geometry
        .contravariant_christoffel()
        .clone()
        .relabel("gamma");
    match gamma.sub(&derived).nonzero().next() {
        Some((idx, _)) => Err(CoreError::ConnectionMismatch {
            component: derived.index_name(&idx),
        }),
        None => Ok(()),
    }
}

fn names(geometry: &Geometry) -> Vec<&str> {
    geometry.ctx().names()
}

fn symmetry_row(geometry: &Geometry) -> ConditionResult {
    let names = names(geometry);
    let items = geometry
        .metric()
        .asymmetry()
        .into_iter()
        .map(|((i, j), v)| {
            (
                format!("g[{}][{}] - g[{}][{}]", i + 1, j + 1, j + 1, i + 1),
                v,
            )
        });
    ConditionResult::from_residuals("metric is symmetric", "dn/a", items, &names)
}

fn compatibility_row(geometry: &Geometry, anchor: &str) -> ConditionResult {
    ConditionResult::from_tensor(
        "g^{ij}_{,k} = Gamma^{ij}_k + Gamma^{ji}_k",
        anchor,
        &geometry.compatibility_residual(),
        &names(geometry),
    )
}

fn dn_rows(geometry: &Geometry, report: &mut CheckReport) {
    report.push(symmetry_row(geometry));
    report.push(compatibility_row(geometry, "dn/b"));
    report.push(ConditionResult::from_tensor(
        "curvature R^{ij}_{lk} vanishes",
        "dn/c",
        geometry.curvature(),
        &names(geometry),
    ));
}

/// Symmetric `g`, metric-compatible `Γ`, vanishing curvature.
pub fn check_dn_hamiltonian(op: &DubrovinNovikov) -> CheckReport {
    let mut report = CheckReport::new("Dubrovin-Novikov operator: Hamiltonianity");
    dn_rows(op.geometry(), &mut report);
    report
}

/// Hamiltonian local part plus the two Killing-type conditions on `f`. With a
/// vanishing tail the rows are exactly those of [`check_dn_hamiltonian`].
pub fn check_ferapontov_hamiltonian(op: &Ferapontov) -> CheckReport {
    let geometry = op.geometry();
    let mut report = CheckReport::new("Ferapontov operator: Hamiltonianity");
    dn_rows(geometry, &mut report);
    if op.tail_vanishes() {
        report.note("nonlocal tail vanishes; only the local part is checked");
        return report;
    }
    let (sym, cyclic) = geometry.killing_residuals(op.f());
    let names = names(geometry);
    report.push(ConditionResult::from_tensor(
        "nabla^i f^j + nabla^j f^i = 0",
        "ferapontov/killing",
        &sym,
        &names,
    ));
    report.push(ConditionResult::from_tensor(
        "f^k nabla^i f^j + cyclic = 0",
        "ferapontov/cyclic",
        &cyclic,
        &names,
    ));
    report
}

/// Metric-compatible `Γ` and constant curvature equal to the operator's `c`.
pub fn check_fm_hamiltonian(op: &FerapontovMokhov) -> CheckReport {
    let geometry = op.geometry();
    let names = names(geometry);
    let mut report = CheckReport::new("Ferapontov-Mokhov operator: Hamiltonianity");
    report.push(symmetry_row(geometry));
    report.push(compatibility_row(geometry, "fm/a"));
    report.push(ConditionResult::from_tensor(
        "constant curvature equal to c",
        "fm/b",
        &geometry.curvature_deviation(op.c()),
        &names,
    ));
    report.note(format!("curvature convention: {CURVATURE_CONVENTION}"));
    match geometry.constant_curvature() {
        Some(c) => report.note(format!(
            "metric has constant curvature {}",
            c.display_with(&names)
        )),
        None => report.note("curvature is not of constant-curvature form"),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Metric;
    use symcore::{parse_expression, VariableContext};

    fn geometry(fields: &[&str], params: &[&str], g: &[&[&str]]) -> Arc<Geometry> {
        let ctx = Arc::new(VariableContext::new(fields, params).unwrap());
        let m = g
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_expression(s, &ctx).unwrap().normalize(&ctx).unwrap())
                    .collect()
            })
            .collect();
        Geometry::new(Metric::new(ctx, m).unwrap()).unwrap()
    }

    fn chaplygin() -> Arc<Geometry> {
        geometry(
            &["u", "v"],
            &["c1", "c2", "c3", "k"],
            &[
                &["-((c1+k)+c2*u+c3*u^2)*(u-v)^2", "0"],
                &["0", "(c1+c2*v+c3*v^2)*(u-v)^2"],
            ],
        )
    }

    fn param(g: &Geometry, s: &str) -> RationalFunction {
        parse_expression(s, g.ctx())
            .unwrap()
            .normalize(g.ctx())
            .unwrap()
    }

    #[test]
    fn dn_examples() {
        let eta = geometry(&["u", "v"], &[], &[&["0", "1"], &["1", "0"]]);
        assert!(check_dn_hamiltonian(&DubrovinNovikov::new(eta)).passed);
        let g = geometry(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        assert!(check_dn_hamiltonian(&DubrovinNovikov::new(g)).passed);
        let report = check_dn_hamiltonian(&DubrovinNovikov::new(chaplygin()));
        assert_eq!(report.failed(), vec!["dn/c"]);
    }

    #[test]
    fn ferapontov_astigmatism_p() {
        let g = geometry(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        let nb = g.ctx().len();
        let f = vec![RationalFunction::zero(nb), RationalFunction::one(nb)];
        let op = Ferapontov::new(g.clone(), RationalFunction::integer(nb, 2), f).unwrap();
        let report = check_ferapontov_hamiltonian(&op);
        assert!(report.passed, "{report}");
        assert_eq!(report.conditions.len(), 5);
        // f = ∂_u is not a Killing field of this metric
        let f = vec![RationalFunction::one(nb), RationalFunction::zero(nb)];
        let op = Ferapontov::new(g, RationalFunction::integer(nb, 2), f).unwrap();
        assert!(check_ferapontov_hamiltonian(&op)
            .failed()
            .contains(&"ferapontov/killing"));
    }

    #[test]
    fn ferapontov_with_zero_tail_matches_dn() {
        let g = geometry(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        let nb = g.ctx().len();
        let op = Ferapontov::new(
            g.clone(),
            RationalFunction::integer(nb, 3),
            vec![RationalFunction::zero(nb); 2],
        )
        .unwrap();
        let a = check_ferapontov_hamiltonian(&op);
        let b = check_dn_hamiltonian(&DubrovinNovikov::new(g));
        assert_eq!(a.conditions, b.conditions);
    }

    #[test]
    fn fm_chaplygin_curvature_is_k() {
        let g = chaplygin();
        let k = param(&g, "k");
        assert!(check_fm_hamiltonian(&FerapontovMokhov::new(g.clone(), k).unwrap()).passed);
        let wrong = param(&g, "k+1");
        let report = check_fm_hamiltonian(&FerapontovMokhov::new(g, wrong).unwrap());
        assert_eq!(report.failed(), vec!["fm/b"]);
        assert!(report
            .notes
            .iter()
            .any(|n| n == "metric has constant curvature k"));
    }

    #[test]
    fn parameters_must_be_constant() {
        let g = geometry(&["u", "v"], &[], &[&["0", "1"], &["1", "0"]]);
        let u = param(&g, "u");
        assert!(matches!(
            FerapontovMokhov::new(g.clone(), u.clone()),
            Err(CoreError::ForbiddenDependence { .. })
        ));
        let f = vec![u.clone(), u.clone()];
        assert!(Ferapontov::new(g, u, f).is_err());
    }

    #[test]
    fn supplied_connection_is_validated() {
        let g = geometry(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        let derived = g.contravariant_christoffel().clone();
        assert!(DubrovinNovikov::with_connection(g.clone(), &derived).is_ok());
        let nb = g.ctx().len();
        let zero = Tensor::from_fn("Gamma", 2, 1, 2, |_| RationalFunction::zero(nb));
        match DubrovinNovikov::with_connection(g, &zero) {
            Err(CoreError::ConnectionMismatch { component }) => {
                assert_eq!(component, "gamma[1][1]_1")
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
