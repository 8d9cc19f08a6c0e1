//! Riemannian data of a contravariant metric `g^{ij}(u)`.
//!
//! Index conventions: `Γ^i_{jk}` is stored as `[i][j][k]` (one upper, two
//! lower), `Γ^{ij}_k` as `[i][j][k]` (two upper, one lower) and
//! `R^{ij}_{lk}` as `[i][j][l][k]`. All derivatives `_{,k}` are with respect to
//! the field `u^k`.

use std::sync::{Arc, OnceLock};

use symcore::{RationalFunction, VariableContext};

use crate::error::{CoreError, Result};
use crate::tensor::{determinant, inverse, Matrix, Tensor};

/// Component form used to read off a constant curvature `c`.
pub const CURVATURE_CONVENTION: &str =
    "R^{ij}_{lk} = c (delta^i_k delta^j_l - delta^i_l delta^j_k)";

/// Contravariant metric components `g^{ij}` over a base context.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    ctx: Arc<VariableContext>,
    g: Matrix,
}

impl Metric {
    /// Checks shape and that no entry depends on `x`. Symmetry and
    /// nondegeneracy are checked downstream.
    pub fn new(ctx: Arc<VariableContext>, g: Matrix) -> Result<Self> {
        let n = ctx.n_fields();
        check_square("metric", &g, n)?;
        let x = ctx.x().0;
        if g.iter().flatten().any(|e| e.depends_on(x)) {
            return Err(CoreError::ForbiddenDependence {
                what: "metric".into(),
                depends_on: "x".into(),
            });
        }
        Ok(Metric { ctx, g })
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn contravariant(&self) -> &Matrix {
        &self.g
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.g[i][j]
    }

    /// `g^{ij} - g^{ji}` for `i < j`, nonzero entries only.
    pub fn asymmetry(&self) -> Vec<((usize, usize), RationalFunction)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = self.g[i][j].sub(&self.g[j][i]);
                if !d.is_zero() {
                    out.push(((i, j), d));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_empty()
    }

    /// Whether every component is free of `x` and the fields.
    pub fn is_constant(&self) -> bool {
        self.g
            .iter()
            .flatten()
            .all(|e| is_constant_in_base(e, &self.ctx))
    }

    pub fn determinant(&self) -> RationalFunction {
        determinant(&self.g)
    }
}

pub(crate) fn check_square(what: &str, m: &Matrix, n: usize) -> Result<()> {
    if m.len() != n {
        return Err(CoreError::DimensionMismatch {
            what: what.into(),
            expected: n,
            found: m.len(),
        });
    }
    for row in m {
        if row.len() != n {
            return Err(CoreError::DimensionMismatch {
                what: format!("{what} row"),
                expected: n,
                found: row.len(),
            });
        }
    }
    Ok(())
}

/// Free of `x` and of every field variable (parameters allowed).
pub fn is_constant_in_base(e: &RationalFunction, ctx: &VariableContext) -> bool {
    !e.depends_on(ctx.x().0) && ctx.fields().all(|v| !e.depends_on(v.0))
}

/// Covariant components `g_{ij}`, the matrix inverse of `g^{ij}`.
pub fn invert_metric(g: &Metric) -> Result<Matrix> {
    if g.determinant().is_zero() {
        return Err(CoreError::DegenerateMetric);
    }
    inverse(g.contravariant()).ok_or(CoreError::DegenerateMetric)
}

fn d(e: &RationalFunction, ctx: &VariableContext, k: usize) -> RationalFunction {
    e.derivative(ctx.field(k).0)
}

/// `Γ^i_{jk} = ½ g^{is}(g_{sj,k} + g_{sk,j} − g_{jk,s})` from covariant
/// components.
pub fn christoffel_second_kind(g_lower: &Matrix, ctx: &VariableContext) -> Result<Tensor> {
    let g_upper = inverse(g_lower).ok_or(CoreError::DegenerateMetric)?;
    Ok(christoffel_from(&g_upper, g_lower, ctx))
}

fn christoffel_from(g_upper: &Matrix, g_lower: &Matrix, ctx: &VariableContext) -> Tensor {
    let n = g_lower.len();
    let nb = ctx.len();
    let half = RationalFunction::constant(nb, symcore::rat(1, 2));
    // first kind: [s][j][k] = g_{sj,k} + g_{sk,j} - g_{jk,s}
    let first = Tensor::from_fn("Gamma_", 0, 3, n, |idx| {
        let (s, j, k) = (idx[0], idx[1], idx[2]);
        d(&g_lower[s][j], ctx, k)
            .add(&d(&g_lower[s][k], ctx, j))
            .sub(&d(&g_lower[j][k], ctx, s))
    });
    Tensor::from_fn("Gamma", 1, 2, n, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let s = symcore::ratfunc::sum(nb, (0..n).map(|s| g_upper[i][s].mul(first.get(&[s, j, k]))));
        s.mul(&half)
    })
}

/// `Γ^{ij}_k = −g^{is} Γ^j_{sk}`.
pub fn contravariant_christoffel(g_upper: &Matrix, gamma: &Tensor) -> Tensor {
    let n = g_upper.len();
    let nb = g_upper[0][0].nvars();
    Tensor::from_fn("Gamma", 2, 1, n, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        symcore::ratfunc::sum(nb, (0..n).map(|s| g_upper[i][s].mul(gamma.get(&[j, s, k])))).neg()
    })
}

/// Derived tensors of a metric. Curvature is computed on first use.
#[derive(Debug)]
pub struct Geometry {
    metric: Metric,
    g_lower: Matrix,
    christoffel: Tensor,
    contravariant: Tensor,
    curvature: OnceLock<Tensor>,
}

pub type GeometryCache = Geometry;

impl Geometry {
    pub fn new(metric: Metric) -> Result<Arc<Self>> {
        let g_lower = invert_metric(&metric)?;
        let christoffel = christoffel_from(metric.contravariant(), &g_lower, metric.ctx());
        let contravariant = contravariant_christoffel(metric.contravariant(), &christoffel);
        Ok(Arc::new(Geometry {
            metric,
            g_lower,
            christoffel,
            contravariant,
            curvature: OnceLock::new(),
        }))
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        self.metric.ctx()
    }

    pub fn n(&self) -> usize {
        self.metric.n()
    }

    fn nb(&self) -> usize {
        self.ctx().len()
    }

    fn sum<F: Fn(usize) -> RationalFunction>(&self, f: F) -> RationalFunction {
        symcore::ratfunc::sum(self.nb(), (0..self.n()).map(f))
    }

    fn d(&self, e: &RationalFunction, k: usize) -> RationalFunction {
        d(e, self.ctx(), k)
    }

    fn g(&self, i: usize, j: usize) -> &RationalFunction {
        self.metric.get(i, j)
    }

    pub fn covariant(&self) -> &Matrix {
        &self.g_lower
    }

    /// `Γ^i_{jk}`.
    pub fn christoffel(&self) -> &Tensor {
        &self.christoffel
    }

    /// `Γ^{ij}_k`.
    pub fn contravariant_christoffel(&self) -> &Tensor {
        &self.contravariant
    }

    fn gamma2(&self, i: usize, j: usize, k: usize) -> &RationalFunction {
        self.christoffel.get(&[i, j, k])
    }

    fn gamma3(&self, i: usize, j: usize, k: usize) -> &RationalFunction {
        self.contravariant.get(&[i, j, k])
    }

    /// `g^{ij}_{,k} − Γ^{ij}_k − Γ^{ji}_k`.
    pub fn compatibility_residual(&self) -> Tensor {
        let gamma = &self.contravariant;
        Tensor::from_fn("Compat", 2, 1, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            self.d(self.g(i, j), k)
                .sub(gamma.get(&[i, j, k]))
                .sub(gamma.get(&[j, i, k]))
        })
    }

    /// Same as [`Self::compatibility_residual`] for an externally supplied
    /// `Γ^{ij}_k`.
    pub fn compatibility_residual_for(&self, gamma: &Tensor) -> Tensor {
        Tensor::from_fn("Compat", 2, 1, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            self.d(self.g(i, j), k)
                .sub(gamma.get(&[i, j, k]))
                .sub(gamma.get(&[j, i, k]))
        })
    }

    /// `R^{ij}_{lk} = Γ^{ij}_{l,k} − Γ^{ij}_{k,l} + Γ^i_{ks}Γ^{sj}_l − Γ^j_{ks}Γ^{si}_l`.
    pub fn curvature(&self) -> &Tensor {
        self.curvature.get_or_init(|| {
            Tensor::from_fn("R", 2, 2, self.n(), |idx| {
                let (i, j, l, k) = (idx[0], idx[1], idx[2], idx[3]);
                let lin = self
                    .d(self.gamma3(i, j, l), k)
                    .sub(&self.d(self.gamma3(i, j, k), l));
                let quad = self.sum(|s| {
                    self.gamma2(i, k, s)
                        .mul(self.gamma3(s, j, l))
                        .sub(&self.gamma2(j, k, s).mul(self.gamma3(s, i, l)))
                });
                lin.add(&quad)
            })
        })
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// The constant `c` with `R^{ij}_{lk} = c (δ^i_k δ^j_l − δ^i_l δ^j_k)`,
    /// if the curvature has that form with `c` free of `x` and the fields.
    pub fn constant_curvature(&self) -> Option<RationalFunction> {
        let n = self.n();
        let r = self.curvature();
        if n < 2 {
            return r.is_zero().then(|| RationalFunction::zero(self.nb()));
        }
        let c = r.get(&[0, 1, 1, 0]).clone();
        if !is_constant_in_base(&c, self.ctx()) {
            return None;
        }
        let matches = r.components().all(|(idx, v)| {
            let (i, j, l, k) = (idx[0], idx[1], idx[2], idx[3]);
            let form = i64::from(i == k && j == l) - i64::from(i == l && j == k);
            v.sub(&c.scale(&symcore::int(form))).is_zero()
        });
        matches.then_some(c)
    }

    /// `R^{ij}_{lk} − c (δ^i_k δ^j_l − δ^i_l δ^j_k)` for a given `c`.
    pub fn curvature_deviation(&self, c: &RationalFunction) -> Tensor {
        let r = self.curvature();
        Tensor::from_fn("R", 2, 2, self.n(), |idx| {
            let (i, j, l, k) = (idx[0], idx[1], idx[2], idx[3]);
            let form = i64::from(i == k && j == l) - i64::from(i == l && j == k);
            r.get(idx).sub(&c.scale(&symcore::int(form)))
        })
    }

    /// `∇_k V^i_j = V^i_{j,k} + Γ^i_{ks}V^s_j − Γ^s_{kj}V^i_s`, stored `[i][j][k]`.
    pub fn nabla_lower_v(&self, v: &Matrix) -> Tensor {
        Tensor::from_fn("nablaV", 1, 2, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            self.d(&v[i][j], k).add(&self.sum(|s| {
                self.gamma2(i, k, s)
                    .mul(&v[s][j])
                    .sub(&self.gamma2(s, k, j).mul(&v[i][s]))
            }))
        })
    }

    /// `∇^i V^j_k = g^{is} ∇_s V^j_k`, stored `[i][j][k]`.
    pub fn nabla_upper_v(&self, v: &Matrix) -> Tensor {
        let lower = self.nabla_lower_v(v);
        Tensor::from_fn("nablaV", 2, 1, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            self.sum(|s| self.g(i, s).mul(lower.get(&[j, k, s])))
        })
    }

    /// `∇^i W^j = g^{is} W^j_{,s} − Γ^{ij}_s W^s`.
    pub fn nabla_upper_w(&self, w: &[RationalFunction]) -> Tensor {
        Tensor::from_fn("nablaW", 2, 0, self.n(), |idx| {
            let (i, j) = (idx[0], idx[1]);
            self.sum(|s| {
                self.g(i, s)
                    .mul(&self.d(&w[j], s))
                    .sub(&self.gamma3(i, j, s).mul(&w[s]))
            })
        })
    }

    /// `∇^i W^j_{,x} = g^{il} W^j_{,xl} − Γ^{ij}_k W^k_{,x}`.
    pub fn nabla_upper_w_x(&self, w: &[RationalFunction]) -> Tensor {
        let x = self.ctx().x().0;
        let wx: Vec<RationalFunction> = w.iter().map(|e| e.derivative(x)).collect();
        self.nabla_upper_w(&wx).relabel("nablaW_x")
    }

    /// `∇_k ∇^i W^j = (∇^iW^j)_{,k} + Γ^i_{kl}∇^lW^j + Γ^j_{kl}∇^iW^l`,
    /// stored `[i][j][k]`.
    pub fn second_covariant_w(&self, w: &[RationalFunction]) -> Tensor {
        let nw = self.nabla_upper_w(w);
        Tensor::from_fn("nablanablaW", 2, 1, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            self.d(nw.get(&[i, j]), k).add(&self.sum(|l| {
                self.gamma2(i, k, l)
                    .mul(nw.get(&[l, j]))
                    .add(&self.gamma2(j, k, l).mul(nw.get(&[i, l])))
            }))
        })
    }

    /// `∇^iW^j + ∇^jW^i`.
    pub fn symmetrized_nabla_w(&self, w: &[RationalFunction]) -> Tensor {
        let nw = self.nabla_upper_w(w);
        Tensor::from_fn("nablaW_sym", 2, 0, self.n(), |idx| {
            nw.get(&[idx[0], idx[1]]).add(nw.get(&[idx[1], idx[0]]))
        })
    }

    /// Killing residuals of a vector field `f`: `∇^if^j + ∇^jf^i` and
    /// `f^k∇^if^j + f^i∇^jf^k + f^j∇^kf^i`.
    pub fn killing_residuals(&self, f: &[RationalFunction]) -> (Tensor, Tensor) {
        let nf = self.nabla_upper_w(f);
        let sym = Tensor::from_fn("Killing", 2, 0, self.n(), |idx| {
            nf.get(&[idx[0], idx[1]]).add(nf.get(&[idx[1], idx[0]]))
        });
        let cyclic = Tensor::from_fn("KillingCyclic", 3, 0, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            f[k].mul(nf.get(&[i, j]))
                .add(&f[i].mul(nf.get(&[j, k])))
                .add(&f[j].mul(nf.get(&[k, i])))
        });
        (sym, cyclic)
    }

    /// `g^{ik}V^j_k − g^{jk}V^i_k`.
    pub fn metric_v_symmetry(&self, v: &Matrix) -> Tensor {
        Tensor::from_fn("gV", 2, 0, self.n(), |idx| {
            let (i, j) = (idx[0], idx[1]);
            self.sum(|k| self.g(i, k).mul(&v[j][k]).sub(&self.g(j, k).mul(&v[i][k])))
        })
    }

    /// `∇^iV^j_k − ∇^jV^i_k`.
    pub fn nabla_v_symmetry(&self, v: &Matrix) -> Tensor {
        let nv = self.nabla_upper_v(v);
        Tensor::from_fn("nablaV_sym", 2, 1, self.n(), |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            nv.get(&[i, j, k]).sub(nv.get(&[j, i, k]))
        })
    }
}

/// Curvature of a metric, all `n^4` components.
pub fn riemann_contravariant(geometry: &Geometry) -> &Tensor {
    geometry.curvature()
}

pub fn is_flat(g: &Metric) -> Result<bool> {
    Ok(Geometry::new(g.clone())?.is_flat())
}

pub fn constant_curvature(g: &Metric) -> Result<Option<RationalFunction>> {
    Ok(Geometry::new(g.clone())?.constant_curvature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcore::parse_expression;

    fn metric(fields: &[&str], params: &[&str], rows: &[&[&str]]) -> Metric {
        let ctx = Arc::new(VariableContext::new(fields, params).unwrap());
        let g = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_expression(s, &ctx).unwrap().normalize(&ctx).unwrap())
                    .collect()
            })
            .collect();
        Metric::new(ctx, g).unwrap()
    }

    fn show(t: &Tensor, g: &Geometry) -> String {
        t.display(&g.ctx().names()).to_string()
    }

    #[test]
    fn antidiagonal_metric_is_involutory_and_flat() {
        let m = metric(&["u", "v"], &[], &[&["0", "1"], &["1", "0"]]);
        assert_eq!(&invert_metric(&m).unwrap(), m.contravariant());
        let g = Geometry::new(m).unwrap();
        assert!(g.christoffel().is_zero());
        assert!(g.contravariant_christoffel().is_zero());
        assert!(g.is_flat());
        assert!(g.constant_curvature().unwrap().is_zero());
    }

    #[test]
    fn diag_metric_christoffels() {
        let m = metric(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        let g = Geometry::new(m).unwrap();
        let names = g.ctx().names();
        let lower: Vec<String> = g
            .covariant()
            .iter()
            .flatten()
            .map(|e| e.display_with(&names))
            .collect();
        assert_eq!(lower, ["1/2/u", "0", "0", "1/2*u"]);
        assert_eq!(
            show(g.christoffel(), &g),
            "Gamma[1]_1_1 = -1/2/u\nGamma[1]_2_2 = -1/2*u\nGamma[2]_1_2 = 1/2/u\nGamma[2]_2_1 = 1/2/u\n"
        );
        assert_eq!(
            show(g.contravariant_christoffel(), &g),
            "Gamma[1][1]_1 = 1\nGamma[1][2]_2 = -1\nGamma[2][1]_2 = 1\nGamma[2][2]_1 = -1/u^2\n"
        );
        assert!(g.compatibility_residual().is_zero());
        assert!(g.is_flat());
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let m = metric(&["u", "v"], &[], &[&["u", "0"], &["0", "0"]]);
        assert!(matches!(
            invert_metric(&m),
            Err(CoreError::DegenerateMetric)
        ));
        assert!(matches!(Geometry::new(m), Err(CoreError::DegenerateMetric)));
    }

    #[test]
    fn metric_depending_on_x_is_rejected() {
        let ctx = Arc::new(VariableContext::new(&["u"], &[] as &[&str]).unwrap());
        let g = vec![vec![RationalFunction::var(ctx.len(), 0)]];
        assert!(matches!(
            Metric::new(ctx, g),
            Err(CoreError::ForbiddenDependence { .. })
        ));
    }

    #[test]
    fn killing_vector_of_diag_metric() {
        let m = metric(&["u", "v"], &[], &[&["2*u", "0"], &["0", "2/u"]]);
        let g = Geometry::new(m).unwrap();
        let nb = g.ctx().len();
        let f = vec![RationalFunction::zero(nb), RationalFunction::one(nb)];
        let nf = g.nabla_upper_w(&f);
        assert_eq!(show(&nf, &g), "nablaW[1][2] = 1\nnablaW[2][1] = -1\n");
        let (sym, cyc) = g.killing_residuals(&f);
        assert!(sym.is_zero() && cyc.is_zero());
        let not_killing = vec![RationalFunction::one(nb), RationalFunction::zero(nb)];
        assert!(!g.killing_residuals(&not_killing).0.is_zero());
    }

    #[test]
    fn chaplygin_curvature_is_k() {
        let m = metric(
            &["u", "v"],
            &["c1", "c2", "c3", "k"],
            &[
                &["-((c1+k)+c2*u+c3*u^2)*(u-v)^2", "0"],
                &["0", "(c1+c2*v+c3*v^2)*(u-v)^2"],
            ],
        );
        let g = Geometry::new(m).unwrap();
        assert!(!g.is_flat());
        let c = g.constant_curvature().unwrap();
        assert_eq!(c.display_with(&g.ctx().names()), "k");
        assert_eq!(
            show(g.curvature(), &g),
            "R[1][2]_1_2 = -k\nR[1][2]_2_1 = k\nR[2][1]_1_2 = k\nR[2][1]_2_1 = -k\n"
        );
    }

    #[test]
    fn second_covariant_w_of_quadratic_tail() {
        let m = metric(&["u", "v"], &[], &[&["0", "1"], &["1", "0"]]);
        let g = Geometry::new(m).unwrap();
        let ctx = g.ctx().clone();
        let w: Vec<RationalFunction> = ["0", "u^2"]
            .iter()
            .map(|s| parse_expression(s, &ctx).unwrap().normalize(&ctx).unwrap())
            .collect();
        assert_eq!(
            show(&g.second_covariant_w(&w), &g),
            "nablanablaW[2][2]_1 = 2\n"
        );
    }
}
