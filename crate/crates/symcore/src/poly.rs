//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept sorted in descending graded-lexicographic order (variable 0
//! is the most significant) with no zero coefficients, so structural equality
//! is polynomial equality.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

pub type Coeff = BigRational;
pub type Exponents = SmallVec<[u16; 8]>;

pub fn rat(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

fn degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| u32::from(x)).sum()
}

/// Graded lexicographic comparison.
pub fn grlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exps: Exponents,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial {
            nvars,
            terms: vec![Term {
                exps: SmallVec::from_elem(0, nvars),
                coeff: c,
            }],
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(nvars, Coeff::one(), {
            let mut e: Exponents = SmallVec::from_elem(0, nvars);
            e[index] = 1;
            e
        })
    }

    pub fn monomial(nvars: usize, coeff: Coeff, exps: Exponents) -> Self {
        debug_assert_eq!(exps.len(), nvars);
        if coeff.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial {
            nvars,
            terms: vec![Term { exps, coeff }],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_unstable_by(|a, b| grlex_cmp(&b.exps, &a.exps));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff += t.coeff,
                _ => {
                    if let Some(last) = out.last() {
                        if last.coeff.is_zero() {
                            out.pop();
                        }
                    }
                    out.push(t);
                }
            }
        }
        if let Some(last) = out.last() {
            if last.coeff.is_zero() {
                out.pop();
            }
        }
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && degree(&self.terms[0].exps) == 0)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.terms[0].coeff.is_one()
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_zero() {
            Some(Coeff::zero())
        } else if self.is_constant() {
            Some(self.terms[0].coeff.clone())
        } else {
            None
        }
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.coeff)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| degree(&t.exps))
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.exps[var]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.exps[var] > 0)
    }

    /// Indices of the variables that occur.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.depends_on(v)).collect()
    }

    /// Returns a copy with `extra` trailing variables that do not occur.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut e = t.exps.clone();
                    e.resize(nvars, 0);
                    Term {
                        exps: e,
                        coeff: t.coeff.clone(),
                    }
                })
                .collect(),
        }
    }

    /// Drops trailing variables; panics if one of them occurs.
    pub fn truncate_vars(&self, nvars: usize) -> Self {
        assert!(nvars <= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    assert!(
                        t.exps[nvars..].iter().all(|&e| e == 0),
                        "truncating a variable that occurs"
                    );
                    Term {
                        exps: SmallVec::from_slice(&t.exps[..nvars]),
                        coeff: t.coeff.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: -t.coeff.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &Coeff| if negate_other { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match grlex_cmp(&a[i].exps, &b[j].exps) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        exps: b[j].exps.clone(),
                        coeff: sign(&b[j].coeff),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].coeff - &b[j].coeff
                    } else {
                        &a[i].coeff + &b[j].coeff
                    };
                    if !c.is_zero() {
                        out.push(Term {
                            exps: a[i].exps.clone(),
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term {
            exps: t.exps.clone(),
            coeff: sign(&t.coeff),
        }));
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if self.is_constant() {
            return other.scale(&self.terms[0].coeff);
        }
        if other.is_constant() {
            return self.scale(&other.terms[0].coeff);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps: Exponents = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push(Term {
                    exps,
                    coeff: &a.coeff * &b.coeff,
                });
            }
        }
        Self::from_terms(self.nvars, terms)
    }

    pub fn mul_term(&self, coeff: &Coeff, exps: &[u16]) -> Self {
        if coeff.is_zero() {
            return Self::zero(self.nvars);
        }
        // multiplying by a monomial preserves the order
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.iter().zip(exps).map(|(x, y)| x + y).collect(),
                    coeff: &t.coeff * coeff,
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exps[var] > 0)
            .map(|t| {
                let mut exps = t.exps.clone();
                let k = exps[var];
                exps[var] -= 1;
                Term {
                    exps,
                    coeff: &t.coeff * int(i64::from(k)),
                }
            })
            .collect();
        Self::from_terms(self.nvars, terms)
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.iter();
        let mut m = match it.next() {
            Some(t) => t.exps.clone(),
            None => return SmallVec::from_elem(0, self.nvars),
        };
        for t in it {
            for (a, b) in m.iter_mut().zip(&t.exps) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides every term by the monomial `exps` (which must divide each).
    pub fn div_monomial(&self, exps: &[u16]) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.iter().zip(exps).map(|(x, y)| x - y).collect(),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if divisor.is_constant() {
            return Some(self.scale(&(Coeff::one() / &divisor.terms[0].coeff)));
        }
        for v in 0..self.nvars {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let lead = &divisor.terms[0];
        let inv_lc = Coeff::one() / &lead.coeff;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some(t) = rem.terms.first() {
            if t.exps.iter().zip(&lead.exps).any(|(a, b)| a < b) {
                return None;
            }
            let exps: Exponents = t.exps.iter().zip(&lead.exps).map(|(a, b)| a - b).collect();
            let coeff = &t.coeff * &inv_lc;
            rem = rem.sub(&divisor.mul_term(&coeff, &exps));
            quotient.push(Term { exps, coeff });
        }
        Some(Self::from_terms(self.nvars, quotient))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&(Coeff::one() / lc)),
        }
    }

    /// Coefficients with respect to `var`, indexed by degree.
    pub fn to_univariate(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); d + 1];
        for t in &self.terms {
            let mut exps = t.exps.clone();
            let k = exps[var] as usize;
            exps[var] = 0;
            buckets[k].push(Term {
                exps,
                coeff: t.coeff.clone(),
            });
        }
        buckets
            .into_iter()
            .map(|ts| Self::from_terms(self.nvars, ts))
            .collect()
    }

    pub fn from_univariate(coeffs: &[Polynomial], var: usize, nvars: usize) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for t in &c.terms {
                let mut exps = t.exps.clone();
                exps[var] += k as u16;
                terms.push(Term {
                    exps,
                    coeff: t.coeff.clone(),
                });
            }
        }
        Self::from_terms(nvars, terms)
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Coeff::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (x, &e) in point.iter().zip(&t.exps) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let c = t.coeff.to_f64().unwrap_or(f64::NAN);
                t.exps
                    .iter()
                    .zip(point)
                    .fold(c, |acc, (&e, x)| acc * x.powi(i32::from(e)))
            })
            .sum()
    }

    /// Substitutes each variable by a polynomial (all with `nvars` variables).
    pub fn compose(&self, values: &[Polynomial], nvars: usize) -> Polynomial {
        assert_eq!(values.len(), self.nvars);
        let mut acc = Polynomial::zero(nvars);
        for t in &self.terms {
            let mut m = Polynomial::constant(nvars, t.coeff.clone());
            for (v, &e) in values.iter().zip(&t.exps) {
                if e > 0 {
                    m = m.mul(&v.pow(u32::from(e)));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Renders with the given variable names, e.g. `3/2*u^2*v - x + 1`.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if idx == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            if factors.is_empty() {
                let _ = write!(s, "{abs}");
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{abs}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}
