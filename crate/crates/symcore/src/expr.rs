//! Expression trees as produced by the parser.
//!
//! Trees are immutable; every operation returns a new tree. Heavy algebra is
//! done on [`RationalFunction`] after [`Expr::normalize`]; the tree-level
//! differentiation and substitution exist so that both routes can be checked
//! against each other.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::context::{VarId, VariableContext};
use crate::error::{Result, SymError};
use crate::poly::{int, Coeff};
use crate::ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Coeff),
    Var(VarId),
    Sum(Arc<Expr>, Arc<Expr>),
    Product(Arc<Expr>, Arc<Expr>),
    /// Integer power; negative exponents are allowed.
    Power(Arc<Expr>, i64),
    Quotient(Arc<Expr>, Arc<Expr>),
}

impl Expr {
    pub fn constant(c: Coeff) -> Self {
        Expr::Const(c)
    }

    pub fn integer(n: i64) -> Self {
        Expr::Const(int(n))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn var(id: VarId) -> Self {
        Expr::Var(id)
    }

    pub fn sum(a: Expr, b: Expr) -> Self {
        Expr::Sum(Arc::new(a), Arc::new(b))
    }

    pub fn difference(a: Expr, b: Expr) -> Self {
        Self::sum(a, Self::product(Self::integer(-1), b))
    }

    pub fn product(a: Expr, b: Expr) -> Self {
        Expr::Product(Arc::new(a), Arc::new(b))
    }

    pub fn power(a: Expr, e: i64) -> Self {
        Expr::Power(Arc::new(a), e)
    }

    pub fn quotient(a: Expr, b: Expr) -> Self {
        Expr::Quotient(Arc::new(a), Arc::new(b))
    }

    fn as_const(&self) -> Option<&Coeff> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    fn is_const_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    fn is_const_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    // light folding keeps derivative trees from growing with 0*... and 1*...
    fn add_folded(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            _ if a.is_const_zero() => b,
            _ if b.is_const_zero() => a,
            _ => Self::sum(a, b),
        }
    }

    fn mul_folded(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            _ if a.is_const_zero() || b.is_const_zero() => Self::zero(),
            _ if a.is_const_one() => b,
            _ if b.is_const_one() => a,
            _ => Self::product(a, b),
        }
    }

    /// Variables occurring in the tree.
    pub fn variables(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => out.push(*v),
            Expr::Sum(a, b) | Expr::Product(a, b) | Expr::Quotient(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Power(a, _) => a.collect_vars(out),
        }
    }

    /// Tree-level partial derivative (sum, product, quotient and power rules).
    pub fn differentiate(&self, v: VarId) -> Expr {
        match self {
            Expr::Const(_) => Self::zero(),
            Expr::Var(w) => Self::integer(i64::from(*w == v)),
            Expr::Sum(a, b) => Self::add_folded(a.differentiate(v), b.differentiate(v)),
            Expr::Product(a, b) => Self::add_folded(
                Self::mul_folded(a.differentiate(v), (**b).clone()),
                Self::mul_folded((**a).clone(), b.differentiate(v)),
            ),
            Expr::Quotient(a, b) => {
                let da = a.differentiate(v);
                let db = b.differentiate(v);
                if db.is_const_zero() {
                    if da.is_const_zero() {
                        return Self::zero();
                    }
                    return Self::quotient(da, (**b).clone());
                }
                let num = Self::add_folded(
                    Self::mul_folded(da, (**b).clone()),
                    Self::mul_folded(Self::integer(-1), Self::mul_folded((**a).clone(), db)),
                );
                Self::quotient(num, Self::power((**b).clone(), 2))
            }
            Expr::Power(a, e) => {
                let da = a.differentiate(v);
                if da.is_const_zero() || *e == 0 {
                    return Self::zero();
                }
                let outer = if *e == 1 {
                    Self::integer(1)
                } else {
                    Self::mul_folded(Self::integer(*e), Self::power((**a).clone(), e - 1))
                };
                Self::mul_folded(outer, da)
            }
        }
    }

    /// Simultaneous substitution of variables by trees.
    pub fn substitute(&self, bindings: &HashMap<VarId, Expr>) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Sum(a, b) => Self::sum(a.substitute(bindings), b.substitute(bindings)),
            Expr::Product(a, b) => Self::product(a.substitute(bindings), b.substitute(bindings)),
            Expr::Quotient(a, b) => Self::quotient(a.substitute(bindings), b.substitute(bindings)),
            Expr::Power(a, e) => Self::power(a.substitute(bindings), *e),
        }
    }

    /// Canonical rational function over all variables of `ctx`.
    pub fn normalize(&self, ctx: &VariableContext) -> Result<RationalFunction> {
        self.normalize_in(ctx.len())
    }

    /// Canonical rational function over the first `nvars` variables.
    pub fn normalize_in(&self, nvars: usize) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Const(c) => RationalFunction::constant(nvars, c.clone()),
            Expr::Var(v) => RationalFunction::var(nvars, v.0),
            Expr::Sum(a, b) => a.normalize_in(nvars)?.add(&b.normalize_in(nvars)?),
            Expr::Product(a, b) => {
                let x = a.normalize_in(nvars)?;
                let y = b.normalize_in(nvars)?;
                x.mul(&y)
            }
            Expr::Quotient(a, b) => {
                let x = a.normalize_in(nvars)?;
                let y = b.normalize_in(nvars)?;
                x.div(&y)?
            }
            Expr::Power(a, e) => a.normalize_in(nvars)?.pow(*e)?,
        })
    }

    /// Rebuilds a tree from a canonical form (a sum of monomials over a
    /// sum of monomials).
    pub fn from_rational_function(rf: &RationalFunction) -> Expr {
        fn poly_tree(p: &crate::poly::Polynomial) -> Expr {
            let mut acc: Option<Expr> = None;
            for t in p.terms() {
                let mut m = Expr::Const(t.coeff.clone());
                for (v, &e) in t.exps.iter().enumerate() {
                    if e > 0 {
                        let base = Expr::Var(VarId(v));
                        let f = if e == 1 {
                            base
                        } else {
                            Expr::power(base, i64::from(e))
                        };
                        m = Expr::mul_folded(m, f);
                    }
                }
                acc = Some(match acc {
                    None => m,
                    Some(a) => Expr::sum(a, m),
                });
            }
            acc.unwrap_or_else(Expr::zero)
        }
        let num = poly_tree(rf.numerator());
        if rf.denominator().is_one() {
            num
        } else {
            Expr::quotient(num, poly_tree(rf.denominator()))
        }
    }

    /// Exact evaluation; `Err(ZeroDenominator)` at a pole of the raw tree.
    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(v) => point[v.0].clone(),
            Expr::Sum(a, b) => a.eval(point)? + b.eval(point)?,
            Expr::Product(a, b) => a.eval(point)? * b.eval(point)?,
            Expr::Quotient(a, b) => {
                let d = b.eval(point)?;
                if d.is_zero() {
                    return Err(SymError::ZeroDenominator);
                }
                a.eval(point)? / d
            }
            Expr::Power(a, e) => {
                let base = a.eval(point)?;
                if *e < 0 {
                    if base.is_zero() {
                        return Err(SymError::ZeroDenominator);
                    }
                    num_traits::pow(Coeff::one() / base, e.unsigned_abs() as usize)
                } else {
                    num_traits::pow(base, *e as usize)
                }
            }
        })
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Expr::Const(c) => c.to_f64().unwrap_or(f64::NAN),
            Expr::Var(v) => point[v.0],
            Expr::Sum(a, b) => a.eval_f64(point) + b.eval_f64(point),
            Expr::Product(a, b) => a.eval_f64(point) * b.eval_f64(point),
            Expr::Quotient(a, b) => a.eval_f64(point) / b.eval_f64(point),
            Expr::Power(a, e) => a.eval_f64(point).powi(*e as i32),
        }
    }

    pub fn display<'a>(&'a self, ctx: &'a VariableContext) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, ctx }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    ctx: &'a VariableContext,
}

impl ExprDisplay<'_> {
    fn write(&self, e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match e {
            Expr::Const(c) => {
                if c.is_negative() || !c.is_integer() {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(v) => f.write_str(self.ctx.name(*v)),
            Expr::Sum(a, b) => {
                f.write_str("(")?;
                self.write(a, f)?;
                f.write_str(" + ")?;
                self.write(b, f)?;
                f.write_str(")")
            }
            Expr::Product(a, b) => {
                self.write(a, f)?;
                f.write_str("*")?;
                self.write(b, f)
            }
            Expr::Quotient(a, b) => {
                f.write_str("(")?;
                self.write(a, f)?;
                f.write_str(")/(")?;
                self.write(b, f)?;
                f.write_str(")")
            }
            Expr::Power(a, e) => {
                f.write_str("(")?;
                self.write(a, f)?;
                write!(f, ")^{e}")
            }
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, f)
    }
}

/// Partial derivative of `e` with respect to the variable called `name`.
pub fn differentiate(e: &Expr, name: &str, ctx: &VariableContext) -> Result<Expr> {
    let v = ctx
        .lookup(name)
        .ok_or_else(|| SymError::UnknownIdentifier {
            name: name.to_string(),
            position: 0,
        })?;
    Ok(e.differentiate(v))
}

/// Simultaneous substitution keyed by variable name.
pub fn substitute(e: &Expr, bindings: &[(&str, Expr)], ctx: &VariableContext) -> Result<Expr> {
    let mut map = HashMap::new();
    for (name, value) in bindings {
        let v = ctx
            .lookup(name)
            .ok_or_else(|| SymError::UnknownIdentifier {
                name: name.to_string(),
                position: 0,
            })?;
        map.insert(v, value.clone());
    }
    Ok(e.substitute(&map))
}

pub fn normalize(e: &Expr, ctx: &VariableContext) -> Result<RationalFunction> {
    e.normalize(ctx)
}

pub fn is_identically_zero(e: &Expr, ctx: &VariableContext) -> Result<bool> {
    Ok(e.normalize(ctx)?.is_zero())
}
