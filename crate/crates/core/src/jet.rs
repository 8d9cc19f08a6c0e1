//! Polynomials in jet variables with coefficients in the base variables, and
//! the total derivatives acting on them.
//!
//! Coefficients live over the base context `[x, fields, parameters]`; jet
//! monomials use the variable ids of the covering-mode extension, which
//! shares the base ids. A coefficient is therefore always jet-free.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use symcore::{JetMonomial, JetRole, RationalFunction, VarId, VarRole, VariableContext};

use crate::error::{CoreError, Result};

/// The base context together with its covering-mode extension.
#[derive(Debug)]
pub struct JetSpace {
    base: Arc<VariableContext>,
    cov: VariableContext,
    u: Vec<[VarId; 2]>,
    u_t: Vec<VarId>,
    p: Vec<[VarId; 3]>,
    p_t: Vec<VarId>,
    q: Vec<[VarId; 3]>,
    q_t: Vec<VarId>,
    r: [VarId; 3],
}

impl JetSpace {
    pub fn new(base: Arc<VariableContext>) -> Result<Arc<Self>> {
        let cov = base.covering_mode()?;
        let n = base.n_fields();
        let jet = |role| cov.jet_var(role);
        let u = (0..n)
            .map(|i| {
                [
                    jet(JetRole::Field { field: i, order: 1 }),
                    jet(JetRole::Field { field: i, order: 2 }),
                ]
            })
            .collect();
        let u_t = (0..n)
            .map(|i| jet(JetRole::FieldTime { field: i }))
            .collect();
        let p = (0..n)
            .map(|i| [0, 1, 2].map(|order| jet(JetRole::Covector { index: i, order })))
            .collect();
        let p_t = (0..n)
            .map(|i| jet(JetRole::CovectorTime { index: i }))
            .collect();
        let q = (0..n)
            .map(|i| [0, 1, 2].map(|order| jet(JetRole::Vector { index: i, order })))
            .collect();
        let q_t = (0..n)
            .map(|i| jet(JetRole::VectorTime { index: i }))
            .collect();
        let r = [
            jet(JetRole::Nonlocal),
            jet(JetRole::NonlocalX),
            jet(JetRole::NonlocalT),
        ];
        Ok(Arc::new(JetSpace {
            base,
            cov,
            u,
            u_t,
            p,
            p_t,
            q,
            q_t,
            r,
        }))
    }

    pub fn base(&self) -> &Arc<VariableContext> {
        &self.base
    }

    pub fn covering(&self) -> &VariableContext {
        &self.cov
    }

    pub fn n(&self) -> usize {
        self.base.n_fields()
    }

    /// Number of base variables, i.e. the arity of every coefficient.
    pub fn nb(&self) -> usize {
        self.base.len()
    }

    /// `u^i_x` (order 1) or `u^i_xx` (order 2).
    pub fn u(&self, i: usize, order: u8) -> VarId {
        assert!((1..=2).contains(&order), "field jets have order 1 or 2");
        self.u[i][usize::from(order) - 1]
    }

    pub fn u_t(&self, i: usize) -> VarId {
        self.u_t[i]
    }

    pub fn p(&self, i: usize, order: u8) -> VarId {
        self.p[i][usize::from(order)]
    }

    pub fn p_t(&self, i: usize) -> VarId {
        self.p_t[i]
    }

    pub fn q(&self, i: usize, order: u8) -> VarId {
        self.q[i][usize::from(order)]
    }

    pub fn q_t(&self, i: usize) -> VarId {
        self.q_t[i]
    }

    pub fn r(&self) -> VarId {
        self.r[0]
    }

    pub fn r_x(&self) -> VarId {
        self.r[1]
    }

    pub fn r_t(&self) -> VarId {
        self.r[2]
    }

    pub fn role(&self, v: VarId) -> Option<JetRole> {
        match self.cov.role(v) {
            VarRole::Jet(role) => Some(role),
            _ => None,
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.cov.names()
    }

    pub fn base_names(&self) -> Vec<&str> {
        self.base.names()
    }
}

/// `Σ c_m · m` over jet monomials `m`, with jet-free coefficients `c_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoly {
    nb: usize,
    terms: BTreeMap<JetMonomial, RationalFunction>,
}

impl JetPoly {
    pub fn zero(nb: usize) -> Self {
        JetPoly {
            nb,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: RationalFunction) -> Self {
        let mut out = Self::zero(c.nvars());
        out.add_term(JetMonomial::one(), c);
        out
    }

    pub fn var(nb: usize, v: VarId) -> Self {
        Self::term(JetMonomial::var(v), RationalFunction::one(nb))
    }

    pub fn term(m: JetMonomial, c: RationalFunction) -> Self {
        let mut out = Self::zero(c.nvars());
        out.add_term(m, c);
        out
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &JetMonomial) -> RationalFunction {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(self.nb))
    }

    /// The jet-free part.
    pub fn constant_term(&self) -> RationalFunction {
        self.coeff(&JetMonomial::one())
    }

    pub fn add_term(&mut self, m: JetMonomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &JetPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &RationalFunction, other: &JetPoly) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), c.mul(d));
        }
    }

    pub fn add(&self, other: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        out.add_scaled(&RationalFunction::integer(self.nb, -1), other);
        out
    }

    pub fn neg(&self) -> JetPoly {
        self.scale(&RationalFunction::integer(self.nb, -1))
    }

    pub fn scale(&self, c: &RationalFunction) -> JetPoly {
        let mut out = JetPoly::zero(self.nb);
        out.add_scaled(c, self);
        out
    }

    pub fn mul_monomial(&self, m: &JetMonomial) -> JetPoly {
        JetPoly {
            nb: self.nb,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.nb);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    /// Highest total degree in jet variables.
    pub fn jet_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(JetMonomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Whether any monomial contains `v`.
    pub fn contains(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.power_of(v) > 0)
    }

    /// Replaces every occurrence of the jet variable `v` by `value`.
    pub fn substitute(&self, v: VarId, value: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero(self.nb);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = JetPoly::constant(c.clone());
            while let Some(r) = rest.without_one(v) {
                rest = r;
                factor = factor.mul(value);
            }
            out.add_assign(&factor.mul_monomial(&rest));
        }
        out
    }

    /// The same polynomial as a single rational function over the covering
    /// context.
    pub fn to_rational_function(&self, space: &JetSpace) -> RationalFunction {
        let ncov = space.covering().len();
        let coeffs: BTreeMap<JetMonomial, RationalFunction> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.extend_vars(ncov)))
            .collect();
        symcore::reconstruct(&coeffs, ncov)
    }

    pub fn display<'a>(&'a self, space: &'a JetSpace) -> JetPolyDisplay<'a> {
        JetPolyDisplay { p: self, space }
    }
}

pub struct JetPolyDisplay<'a> {
    p: &'a JetPoly,
    space: &'a JetSpace,
}

impl fmt::Display for JetPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        let names = self.space.base_names();
        // highest jet degree first, then the monomial order
        let mut terms: Vec<_> = self.p.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (pos, (m, c)) in terms.into_iter().enumerate() {
            let cs = c.display_with(&names);
            let (negative, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest),
                _ => (false, cs.as_str()),
            };
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = m.display(self.space.covering());
            if m.is_one() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mono}")?;
            } else if body.contains(' ') || body.contains('/') {
                write!(f, "({body})*{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Total x- and t-derivatives on a jet space, with optional evolution rules
/// for `u_t`, `p_t`, `q_t` and the nonlocal `r`. Without a rule, `p`, `q`, `r`
/// and the fields get their formal t-derivative; higher jets have none.
#[derive(Debug, Clone)]
pub struct TotalDerivatives {
    space: Arc<JetSpace>,
    u_t: Option<Vec<JetPoly>>,
    u_xt: Option<Vec<JetPoly>>,
    p_t: Option<Vec<JetPoly>>,
    p_xt: Option<Vec<JetPoly>>,
    q_t: Option<Vec<JetPoly>>,
    q_xt: Option<Vec<JetPoly>>,
    r_x: Option<JetPoly>,
    r_t: Option<JetPoly>,
}

impl TotalDerivatives {
    pub fn new(space: Arc<JetSpace>) -> Self {
        TotalDerivatives {
            space,
            u_t: None,
            u_xt: None,
            p_t: None,
            p_xt: None,
            q_t: None,
            q_xt: None,
            r_x: None,
            r_t: None,
        }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn nb(&self) -> usize {
        self.space.nb()
    }

    /// `u^i_t = rules[i]`.
    pub fn with_field_rules(mut self, rules: Vec<JetPoly>) -> Result<Self> {
        let dx = rules.iter().map(|f| self.dx(f)).collect::<Result<_>>()?;
        self.u_t = Some(rules);
        self.u_xt = Some(dx);
        Ok(self)
    }

    /// `p_{i,t} = rules[i]`.
    pub fn with_covector_rules(mut self, rules: Vec<JetPoly>) -> Result<Self> {
        let dx = rules.iter().map(|f| self.dx(f)).collect::<Result<_>>()?;
        self.p_t = Some(rules);
        self.p_xt = Some(dx);
        Ok(self)
    }

    /// `q^i_t = rules[i]`.
    pub fn with_vector_rules(mut self, rules: Vec<JetPoly>) -> Result<Self> {
        let dx = rules.iter().map(|f| self.dx(f)).collect::<Result<_>>()?;
        self.q_t = Some(rules);
        self.q_xt = Some(dx);
        Ok(self)
    }

    /// `r_x = r_x_rule`, `r_t = r_t_rule`.
    pub fn with_nonlocal(mut self, r_x_rule: JetPoly, r_t_rule: JetPoly) -> Self {
        self.r_x = Some(r_x_rule);
        self.r_t = Some(r_t_rule);
        self
    }

    pub fn field_rules(&self) -> Option<&[JetPoly]> {
        self.u_t.as_deref()
    }

    pub fn covector_rules(&self) -> Option<&[JetPoly]> {
        self.p_t.as_deref()
    }

    pub fn vector_rules(&self) -> Option<&[JetPoly]> {
        self.q_t.as_deref()
    }

    pub fn nonlocal_rules(&self) -> Option<(&JetPoly, &JetPoly)> {
        self.r_x.as_ref().zip(self.r_t.as_ref())
    }

    /// `D_x c = c_{,x} + c_{,u^i} u^i_x` for a jet-free coefficient.
    pub fn dx_coeff(&self, c: &RationalFunction) -> JetPoly {
        let sp = &self.space;
        let mut out = JetPoly::constant(c.derivative(sp.base.x().0));
        for i in 0..sp.n() {
            let d = c.derivative(sp.base.field(i).0);
            out.add_term(JetMonomial::var(sp.u(i, 1)), d);
        }
        out
    }

    fn exceeded(&self, v: VarId) -> CoreError {
        CoreError::JetOrderExceeded {
            var: self.space.cov.name(v).to_string(),
            max: JetRole::MAX_ORDER,
        }
    }

    fn missing(&self, v: VarId) -> CoreError {
        CoreError::MissingRule(self.space.cov.name(v).to_string())
    }

    fn dx_var(&self, v: VarId) -> Result<JetPoly> {
        let sp = &self.space;
        let nb = sp.nb();
        let next = match sp.role(v).expect("jet variable") {
            JetRole::Field { field, order } if order < JetRole::MAX_ORDER => sp.u(field, order + 1),
            JetRole::Covector { index, order } if order < JetRole::MAX_ORDER => {
                sp.p(index, order + 1)
            }
            JetRole::Vector { index, order } if order < JetRole::MAX_ORDER => {
                sp.q(index, order + 1)
            }
            JetRole::Nonlocal => {
                return Ok(self
                    .r_x
                    .clone()
                    .unwrap_or_else(|| JetPoly::var(nb, sp.r_x())))
            }
            JetRole::Field { .. } | JetRole::Covector { .. } | JetRole::Vector { .. } => {
                return Err(self.exceeded(v))
            }
            _ => return Err(self.missing(v)),
        };
        Ok(JetPoly::var(nb, next))
    }

    fn dt_var(&self, v: VarId) -> Result<JetPoly> {
        let sp = &self.space;
        let pick = |rules: &Option<Vec<JetPoly>>, i: usize| rules.as_ref().map(|r| r[i].clone());
        let nb = sp.nb();
        let rule = match sp.role(v).expect("jet variable") {
            JetRole::Field { field, order: 1 } => pick(&self.u_xt, field),
            JetRole::Covector { index, order: 0 } => {
                Some(pick(&self.p_t, index).unwrap_or_else(|| JetPoly::var(nb, sp.p_t(index))))
            }
            JetRole::Covector { index, order: 1 } => pick(&self.p_xt, index),
            JetRole::Vector { index, order: 0 } => {
                Some(pick(&self.q_t, index).unwrap_or_else(|| JetPoly::var(nb, sp.q_t(index))))
            }
            JetRole::Vector { index, order: 1 } => pick(&self.q_xt, index),
            JetRole::Nonlocal => Some(
                self.r_t
                    .clone()
                    .unwrap_or_else(|| JetPoly::var(nb, sp.r_t())),
            ),
            JetRole::Field { .. } | JetRole::Covector { .. } | JetRole::Vector { .. } => {
                return Err(self.exceeded(v))
            }
            _ => None,
        };
        rule.ok_or_else(|| self.missing(v))
    }

    /// Applies a derivation given its action on coefficients and on single
    /// jet variables, extended by the Leibniz rule.
    fn derive<C, V>(&self, p: &JetPoly, on_coeff: C, on_var: V) -> Result<JetPoly>
    where
        C: Fn(&RationalFunction) -> Result<JetPoly>,
        V: Fn(VarId) -> Result<JetPoly>,
    {
        let mut out = JetPoly::zero(p.nb);
        for (m, c) in &p.terms {
            out.add_assign(&on_coeff(c)?.mul_monomial(m));
            for &(v, e) in m.factors() {
                let rest = m.without_one(v).expect("factor occurs");
                let dv = on_var(v)?;
                let k = c.scale(&symcore::int(i64::from(e)));
                out.add_scaled(&k, &dv.mul_monomial(&rest));
            }
        }
        Ok(out)
    }

    pub fn dx(&self, p: &JetPoly) -> Result<JetPoly> {
        self.derive(p, |c| Ok(self.dx_coeff(c)), |v| self.dx_var(v))
    }

    /// `D_t` on the coefficient side: `c_{,u^i} u^i_t` with `u^i_t` replaced by
    /// its rule when one is set.
    pub fn dt_coeff(&self, c: &RationalFunction) -> JetPoly {
        let sp = &self.space;
        let mut out = JetPoly::zero(sp.nb());
        for i in 0..sp.n() {
            let d = c.derivative(sp.base.field(i).0);
            if d.is_zero() {
                continue;
            }
            match &self.u_t {
                Some(rules) => out.add_scaled(&d, &rules[i]),
                None => out.add_term(JetMonomial::var(sp.u_t(i)), d),
            }
        }
        out
    }

    pub fn dt(&self, p: &JetPoly) -> Result<JetPoly> {
        self.derive(p, |c| Ok(self.dt_coeff(c)), |v| self.dt_var(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcore::{parse_expression, rat};

    fn space() -> Arc<JetSpace> {
        let ctx = VariableContext::new(&["u", "v"], &["k"]).unwrap();
        JetSpace::new(Arc::new(ctx)).unwrap()
    }

    fn coeff(sp: &JetSpace, s: &str) -> RationalFunction {
        parse_expression(s, sp.base())
            .unwrap()
            .normalize(sp.base())
            .unwrap()
    }

    #[test]
    fn dx_of_coefficient_is_chain_rule() {
        let sp = space();
        let d = TotalDerivatives::new(sp.clone());
        let c = coeff(&sp, "x*u^2 + k*v");
        let out = d.dx(&JetPoly::constant(c)).unwrap();
        assert_eq!(out.display(&sp).to_string(), "2*x*u*u_x + k*v_x + u^2");
    }

    #[test]
    fn dx_raises_order_and_stops_at_two() {
        let sp = space();
        let nb = sp.nb();
        let d = TotalDerivatives::new(sp.clone());
        let p1x = JetPoly::var(nb, sp.p(0, 1));
        assert_eq!(d.dx(&p1x).unwrap(), JetPoly::var(nb, sp.p(0, 2)));
        let uxx = JetPoly::var(nb, sp.u(0, 2));
        assert!(matches!(
            d.dx(&uxx),
            Err(CoreError::JetOrderExceeded { .. })
        ));
    }

    #[test]
    fn leibniz_on_monomials() {
        let sp = space();
        let nb = sp.nb();
        let d = TotalDerivatives::new(sp.clone());
        let ux = JetPoly::var(nb, sp.u(0, 1));
        let sq = ux.mul(&ux).scale(&coeff(&sp, "v"));
        let out = d.dx(&sq).unwrap();
        // D_x(v u_x^2) = v_x u_x^2 + 2 v u_x u_xx
        let expected = JetPoly::var(nb, sp.u(1, 1)).mul(&ux).mul(&ux).add(
            &ux.mul(&JetPoly::var(nb, sp.u(0, 2)))
                .scale(&coeff(&sp, "2*v")),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn dt_uses_rules_and_reports_missing_ones() {
        let sp = space();
        let nb = sp.nb();
        // u_t = v_x, v_t = u_x / u^2 - 2x
        let rules = vec![
            JetPoly::var(nb, sp.u(1, 1)),
            JetPoly::var(nb, sp.u(0, 1))
                .scale(&coeff(&sp, "1/u^2"))
                .add(&JetPoly::constant(coeff(&sp, "-2*x"))),
        ];
        let d = TotalDerivatives::new(sp.clone())
            .with_field_rules(rules)
            .unwrap();
        let out = d.dt(&JetPoly::constant(coeff(&sp, "v"))).unwrap();
        assert_eq!(out.display(&sp).to_string(), "(1/u^2)*u_x - 2*x");
        let ux_t = d.dt(&JetPoly::var(nb, sp.u(0, 1))).unwrap();
        assert_eq!(ux_t, JetPoly::var(nb, sp.u(1, 2)));
        assert_eq!(
            d.dt(&JetPoly::var(nb, sp.p(0, 0))).unwrap(),
            JetPoly::var(nb, sp.p_t(0))
        );
        assert!(matches!(
            d.dt(&JetPoly::var(nb, sp.p(0, 1))),
            Err(CoreError::MissingRule(_))
        ));
    }

    #[test]
    fn nonlocal_rules() {
        let sp = space();
        let nb = sp.nb();
        let r_x = JetPoly::var(nb, sp.p(1, 0));
        let r_t = JetPoly::var(nb, sp.p(0, 1)).scale(&RationalFunction::constant(nb, rat(1, 2)));
        let d = TotalDerivatives::new(sp.clone()).with_nonlocal(r_x.clone(), r_t.clone());
        let r = JetPoly::var(nb, sp.r());
        assert_eq!(d.dx(&r).unwrap(), r_x);
        assert_eq!(d.dt(&r).unwrap(), r_t);
    }
}
