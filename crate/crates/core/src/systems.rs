//! Quasilinear systems `u^i_t = V^i_j u^j_x + W^i(x, u)` and their
//! linearization operators.

use std::sync::{Arc, OnceLock};

use symcore::{JetMonomial, RationalFunction, VariableContext};

use crate::error::{CoreError, Result};
use crate::geometry::check_square;
use crate::jet::{JetPoly, JetSpace, TotalDerivatives};
use crate::tensor::Matrix;

#[derive(Debug, Clone)]
pub struct QuasilinearSystem {
    ctx: Arc<VariableContext>,
    v: Matrix,
    w: Vec<RationalFunction>,
    space: OnceLock<Arc<JetSpace>>,
}

impl PartialEq for QuasilinearSystem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.v == other.v && self.w == other.w
    }
}

impl QuasilinearSystem {
    /// `V` must not depend on `x`.
    pub fn new(ctx: Arc<VariableContext>, v: Matrix, w: Vec<RationalFunction>) -> Result<Self> {
        let sys = Self::with_explicit_x(ctx, v, w)?;
        if sys.v_depends_on_x() {
            return Err(CoreError::ForbiddenDependence {
                what: "V".into(),
                depends_on: "x".into(),
            });
        }
        Ok(sys)
    }

    /// Like [`Self::new`] but accepts `V(x, u)`; used to probe the checks
    /// outside their stated scope.
    pub fn with_explicit_x(
        ctx: Arc<VariableContext>,
        v: Matrix,
        w: Vec<RationalFunction>,
    ) -> Result<Self> {
        let n = ctx.n_fields();
        check_square("V", &v, n)?;
        if w.len() != n {
            return Err(CoreError::DimensionMismatch {
                what: "W".into(),
                expected: n,
                found: w.len(),
            });
        }
        Ok(QuasilinearSystem {
            ctx,
            v,
            w,
            space: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn w(&self) -> &[RationalFunction] {
        &self.w
    }

    /// Same `V`, new tail.
    pub fn with_w(&self, w: Vec<RationalFunction>) -> Result<Self> {
        Self::with_explicit_x(self.ctx.clone(), self.v.clone(), w)
    }

    pub fn v_depends_on_x(&self) -> bool {
        let x = self.ctx.x().0;
        self.v.iter().flatten().any(|e| e.depends_on(x))
    }

    pub fn w_depends_on_x(&self) -> bool {
        let x = self.ctx.x().0;
        self.w.iter().any(|e| e.depends_on(x))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.w.iter().all(RationalFunction::is_zero)
    }

    pub fn jet_space(&self) -> Result<Arc<JetSpace>> {
        if let Some(s) = self.space.get() {
            return Ok(s.clone());
        }
        let s = JetSpace::new(self.ctx.clone())?;
        Ok(self.space.get_or_init(|| s).clone())
    }

    /// Right-hand sides `F^i = V^i_j u^j_x + W^i`.
    pub fn evolution(&self, space: &JetSpace) -> Vec<JetPoly> {
        let nb = space.nb();
        (0..self.n())
            .map(|i| {
                let mut f = JetPoly::constant(self.w[i].clone());
                for j in 0..self.n() {
                    f.add_term(JetMonomial::var(space.u(j, 1)), self.v[i][j].clone());
                }
                debug_assert_eq!(f.nb(), nb);
                f
            })
            .collect()
    }

    /// Total derivatives with `u_t` replaced on-shell.
    pub fn on_shell(&self) -> Result<TotalDerivatives> {
        let space = self.jet_space()?;
        let rules = self.evolution(&space);
        TotalDerivatives::new(space).with_field_rules(rules)
    }

    /// `M^i_l = V^i_{j,l} u^j_x + W^i_{,l}`.
    pub fn derivative_matrix(&self, space: &JetSpace) -> Vec<Vec<JetPoly>> {
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|l| {
                        let ul = self.ctx.field(l).0;
                        let mut m = JetPoly::constant(self.w[i].derivative(ul));
                        for j in 0..n {
                            m.add_term(
                                JetMonomial::var(space.u(j, 1)),
                                self.v[i][j].derivative(ul),
                            );
                        }
                        m
                    })
                    .collect()
            })
            .collect()
    }
}

/// `ℓ_F(φ)^i = D_t φ^i − M^i_l φ^l − V^i_j D_x φ^j`.
pub fn linearization(
    sys: &QuasilinearSystem,
    td: &TotalDerivatives,
    phi: &[JetPoly],
) -> Result<Vec<JetPoly>> {
    let n = sys.n();
    let m = sys.derivative_matrix(td.space());
    let dx: Vec<JetPoly> = phi.iter().map(|p| td.dx(p)).collect::<Result<_>>()?;
    (0..n)
        .map(|i| {
            let mut out = td.dt(&phi[i])?;
            for l in 0..n {
                out = out.sub(&m[i][l].mul(&phi[l]));
            }
            for j in 0..n {
                out = out.sub(&dx[j].scale(&sys.v()[i][j]));
            }
            Ok(out)
        })
        .collect()
}

/// `ℓ_F*(ψ)_i = −D_t ψ_i + (D_x V^k_i − M^k_i) ψ_k + V^k_i D_x ψ_k`, the formal
/// adjoint of [`linearization`].
pub fn adjoint_linearization(
    sys: &QuasilinearSystem,
    td: &TotalDerivatives,
    psi: &[JetPoly],
) -> Result<Vec<JetPoly>> {
    let n = sys.n();
    let m = sys.derivative_matrix(td.space());
    let dx: Vec<JetPoly> = psi.iter().map(|p| td.dx(p)).collect::<Result<_>>()?;
    (0..n)
        .map(|i| {
            let mut out = td.dt(&psi[i])?.neg();
            for k in 0..n {
                let factor = td.dx_coeff(&sys.v()[k][i]).sub(&m[k][i]);
                out.add_assign(&factor.mul(&psi[k]));
                out.add_scaled(&sys.v()[k][i], &dx[k]);
            }
            Ok(out)
        })
        .collect()
}

/// Evolutionary vector fields of order zero or of hydrodynamic type.
#[derive(Debug, Clone, PartialEq)]
pub enum EvolutionaryVectorField {
    /// `φ^i = φ^i(u)`.
    ZeroOrder(Vec<RationalFunction>),
    /// `φ^i = w^i_j(u) u^j_x`.
    Hydrodynamic(Matrix),
}

impl EvolutionaryVectorField {
    /// `φ^i = u^i_x`.
    pub fn translation(n: usize, nb: usize) -> Self {
        EvolutionaryVectorField::Hydrodynamic(crate::tensor::identity(n, nb))
    }

    pub fn to_jets(&self, space: &JetSpace) -> Vec<JetPoly> {
        match self {
            EvolutionaryVectorField::ZeroOrder(f) => {
                f.iter().cloned().map(JetPoly::constant).collect()
            }
            EvolutionaryVectorField::Hydrodynamic(w) => w
                .iter()
                .map(|row| {
                    let mut p = JetPoly::zero(space.nb());
                    for (j, c) in row.iter().enumerate() {
                        p.add_term(JetMonomial::var(space.u(j, 1)), c.clone());
                    }
                    p
                })
                .collect(),
        }
    }
}

pub fn apply_linearization(
    sys: &QuasilinearSystem,
    phi: &EvolutionaryVectorField,
) -> Result<Vec<JetPoly>> {
    let td = sys.on_shell()?;
    linearization(sys, &td, &phi.to_jets(td.space()))
}

/// Adjoint linearization of a covector that may contain the formal `p_i`;
/// their t-derivatives stay formal.
pub fn apply_adjoint_linearization(
    sys: &QuasilinearSystem,
    psi: &[JetPoly],
) -> Result<Vec<JetPoly>> {
    let td = sys.on_shell()?;
    adjoint_linearization(sys, &td, psi)
}

pub fn is_symmetry(sys: &QuasilinearSystem, phi: &EvolutionaryVectorField) -> Result<bool> {
    Ok(apply_linearization(sys, phi)?.iter().all(JetPoly::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcore::parse_expression;

    fn astigmatism() -> QuasilinearSystem {
        let ctx = Arc::new(VariableContext::new(&["u", "v"], &[] as &[&str]).unwrap());
        let p = |s: &str| parse_expression(s, &ctx).unwrap().normalize(&ctx).unwrap();
        let v = vec![vec![p("0"), p("1")], vec![p("1/u^2"), p("0")]];
        let w = vec![p("0"), p("-2*x")];
        QuasilinearSystem::new(ctx.clone(), v, w).unwrap()
    }

    #[test]
    fn rejects_x_in_v_unless_asked() {
        let ctx = Arc::new(VariableContext::new(&["u"], &[] as &[&str]).unwrap());
        let x = RationalFunction::var(ctx.len(), 0);
        let zero = RationalFunction::zero(ctx.len());
        assert!(
            QuasilinearSystem::new(ctx.clone(), vec![vec![x.clone()]], vec![zero.clone()]).is_err()
        );
        assert!(QuasilinearSystem::with_explicit_x(ctx, vec![vec![x]], vec![zero]).is_ok());
    }

    #[test]
    fn astigmatism_symmetries() {
        let sys = astigmatism();
        let nb = sys.ctx().len();
        let zero = RationalFunction::zero(nb);
        let one = RationalFunction::one(nb);
        let shift_v = EvolutionaryVectorField::ZeroOrder(vec![zero.clone(), one.clone()]);
        assert!(is_symmetry(&sys, &shift_v).unwrap());
        let shift_u = EvolutionaryVectorField::ZeroOrder(vec![one, zero.clone()]);
        let out = apply_linearization(&sys, &shift_u).unwrap();
        let space = sys.jet_space().unwrap();
        assert!(out[0].is_zero());
        assert_eq!(out[1].display(&space).to_string(), "(2/u^3)*u_x");
        let nothing = EvolutionaryVectorField::ZeroOrder(vec![zero.clone(), zero]);
        assert!(apply_linearization(&sys, &nothing)
            .unwrap()
            .iter()
            .all(JetPoly::is_zero));
    }

    #[test]
    fn translation_is_a_symmetry_of_homogeneous_systems() {
        let sys = astigmatism();
        let nb = sys.ctx().len();
        let homogeneous = sys.with_w(vec![RationalFunction::zero(nb); 2]).unwrap();
        let phi = EvolutionaryVectorField::translation(2, nb);
        assert!(is_symmetry(&homogeneous, &phi).unwrap());
        // the x-dependent tail breaks it
        assert!(!is_symmetry(&sys, &phi).unwrap());
    }

    #[test]
    fn adjoint_of_formal_covector_is_the_cotangent_rule() {
        let sys = astigmatism();
        let space = sys.jet_space().unwrap();
        let nb = space.nb();
        let psi: Vec<JetPoly> = (0..2).map(|i| JetPoly::var(nb, space.p(i, 0))).collect();
        let out = apply_adjoint_linearization(&sys, &psi).unwrap();
        assert_eq!(out[0].display(&space).to_string(), "-p1_t + (1/u^2)*p2_x");
        assert_eq!(out[1].display(&space).to_string(), "p1_x - p2_t");
    }
}
