//! Splitting an expression into jet monomials with jet-free coefficients.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::context::{VarId, VariableContext};
use crate::error::{Result, SymError};
use crate::expr::Expr;
use crate::poly::{Exponents, Polynomial, Term};
use crate::ratfunc::RationalFunction;

/// A product of jet indeterminates, stored as sorted `(variable, power)`
/// pairs. The empty monomial is `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct JetMonomial(SmallVec<[(VarId, u16); 4]>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        JetMonomial(SmallVec::from_slice(&[(v, 1)]))
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        vars.into_iter()
            .fold(Self::one(), |acc, v| acc.mul(&Self::var(v)))
    }

    pub fn factors(&self) -> &[(VarId, u16)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| u32::from(*e)).sum()
    }

    pub fn power_of(&self, v: VarId) -> u16 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: SmallVec<[(VarId, u16); 4]> = SmallVec::new();
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        JetMonomial(out)
    }

    /// Removes one power of `v`; `None` if `v` does not occur.
    pub fn without_one(&self, v: VarId) -> Option<Self> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let mut out = self.0.clone();
        if out[pos].1 == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some(JetMonomial(out))
    }

    pub fn to_exponents(&self, nvars: usize) -> Exponents {
        let mut e: Exponents = SmallVec::from_elem(0, nvars);
        for (v, k) in &self.0 {
            e[v.0] = *k;
        }
        e
    }

    pub fn display<'a>(&'a self, ctx: &'a VariableContext) -> JetMonomialDisplay<'a> {
        JetMonomialDisplay { m: self, ctx }
    }
}

pub struct JetMonomialDisplay<'a> {
    m: &'a JetMonomial,
    ctx: &'a VariableContext,
}

impl fmt::Display for JetMonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .m
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    self.ctx.name(*v).to_string()
                } else {
                    format!("{}^{}", self.ctx.name(*v), e)
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Splits a rational function over a covering-mode context into jet
/// monomials. Coefficients are returned over the full context (with no jet
/// variable occurring).
pub fn split_by_jets(
    rf: &RationalFunction,
    ctx: &VariableContext,
) -> Result<BTreeMap<JetMonomial, RationalFunction>> {
    let nvars = rf.nvars();
    let jet_vars: Vec<usize> = (0..nvars).filter(|&v| ctx.is_jet(VarId(v))).collect();
    if jet_vars.iter().any(|&v| rf.denominator().depends_on(v)) {
        return Err(SymError::NonPolynomialInJets(rf.display_with(&ctx.names())));
    }
    let mut buckets: BTreeMap<JetMonomial, Vec<Term>> = BTreeMap::new();
    for t in rf.numerator().terms() {
        let mut exps = t.exps.clone();
        let mut m = JetMonomial::one();
        for &v in &jet_vars {
            if exps[v] > 0 {
                m = m.mul(&JetMonomial(SmallVec::from_slice(&[(VarId(v), exps[v])])));
                exps[v] = 0;
            }
        }
        buckets.entry(m).or_default().push(Term {
            exps,
            coeff: t.coeff.clone(),
        });
    }
    let den = RationalFunction::from_poly(rf.denominator().clone());
    let mut out = BTreeMap::new();
    for (m, terms) in buckets {
        let num = RationalFunction::from_poly(Polynomial::from_terms(nvars, terms));
        out.insert(m, num.div(&den)?);
    }
    Ok(out)
}

/// Coefficients of `e` with respect to the jet monomials in `basis`.
///
/// Every basis monomial gets an entry (zero when absent). A monomial of `e`
/// outside the basis is an error, so that `e == Σ coeff·m` always holds for
/// the returned map.
pub fn collect_jet_coefficients(
    e: &Expr,
    ctx: &VariableContext,
    basis: &[JetMonomial],
) -> Result<BTreeMap<JetMonomial, RationalFunction>> {
    let rf = e.normalize(ctx)?;
    let mut split = split_by_jets(&rf, ctx)?;
    let mut out = BTreeMap::new();
    for m in basis {
        let c = split
            .remove(m)
            .unwrap_or_else(|| RationalFunction::zero(ctx.len()));
        out.insert(m.clone(), c);
    }
    if let Some((m, _)) = split.into_iter().next() {
        return Err(SymError::MonomialNotInBasis(m.display(ctx).to_string()));
    }
    Ok(out)
}

/// Inverse of [`collect_jet_coefficients`]: `Σ coeff·m`.
pub fn reconstruct(
    coefficients: &BTreeMap<JetMonomial, RationalFunction>,
    nvars: usize,
) -> RationalFunction {
    coefficients
        .iter()
        .fold(RationalFunction::zero(nvars), |acc, (m, c)| {
            let mono = RationalFunction::from_poly(Polynomial::monomial(
                nvars,
                crate::poly::int(1),
                m.to_exponents(nvars),
            ));
            acc.add(&c.mul(&mono))
        })
}
