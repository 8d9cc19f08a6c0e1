//! Canonical rational functions.
//!
//! A [`RationalFunction`] is a reduced fraction of polynomials whose
//! denominator has leading coefficient one (graded-lex order). Two rational
//! functions are equal as functions iff they are structurally equal, which is
//! what every zero test in the crate relies on.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Result, SymError};
use crate::gcd::gcd;
use crate::poly::{int, Coeff, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// The canonical form of an expression.
pub type CanonicalForm = RationalFunction;

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction {
            num: Polynomial::zero(nvars),
            den: Polynomial::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        RationalFunction {
            num: Polynomial::constant(nvars, c),
            den: Polynomial::one(nvars),
        }
    }

    pub fn integer(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, int(n))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::from_poly(Polynomial::var(nvars, index))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(n),
        }
    }

    /// Reduces `num/den` to canonical form.
    pub fn from_parts(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(den.nvars());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::normalize_sign(num, den)
    }

    fn normalize_sign(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = Coeff::one() / lc;
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    pub fn extend_vars(&self, nvars: usize) -> Self {
        RationalFunction {
            num: self.num.extend_vars(nvars),
            den: self.den.extend_vars(nvars),
        }
    }

    pub fn truncate_vars(&self, nvars: usize) -> Self {
        RationalFunction {
            num: self.num.truncate_vars(nvars),
            den: self.den.truncate_vars(nvars),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&other.num));
            }
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            let num = self.num.mul(&other.den).add(&other.num);
            return Self::normalize_sign(num, other.den.clone());
        }
        if other.den.is_one() {
            let num = other.num.mul(&self.den).add(&self.num);
            return Self::normalize_sign(num, self.den.clone());
        }
        // only factors of gcd(den_a, den_b) can cancel afterwards
        let g = gcd(&self.den, &other.den);
        let da = self.den.exact_div(&g).expect("gcd divides");
        let db = other.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = da.mul(&other.den);
        if num.is_zero() {
            return Self::zero(self.nvars());
        }
        if g.is_one() {
            return Self::normalize_sign(num, den);
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            Self::normalize_sign(num, den)
        } else {
            Self::normalize_sign(
                num.exact_div(&h).expect("gcd divides"),
                den.exact_div(&h).expect("gcd divides"),
            )
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (
                self.num.exact_div(&g1).expect("gcd divides"),
                other.den.exact_div(&g1).expect("gcd divides"),
            )
        };
        let (n2, d1) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (
                other.num.exact_div(&g2).expect("gcd divides"),
                self.den.exact_div(&g2).expect("gcd divides"),
            )
        };
        Self::normalize_sign(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(Self::normalize_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        if !self.depends_on(var) {
            return Self::zero(self.nvars());
        }
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            };
        }
        let dd = self.den.derivative(var);
        // (n/d)' = (n' d - n d') / d^2; with g = gcd(d, d') the fraction
        // (n' (d/g) - n (d'/g)) / (d (d/g)) needs only a gcd against d
        let g = gcd(&self.den, &dd);
        let dg = self.den.exact_div(&g).expect("gcd divides");
        let ddg = dd.exact_div(&g).expect("gcd divides");
        let num = dn.mul(&dg).sub(&self.num.mul(&ddg));
        let den = self.den.mul(&dg);
        Self::reduce(num, den)
    }

    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Substitutes every variable by a rational function with `nvars`
    /// variables.
    pub fn compose(&self, values: &[RationalFunction], nvars: usize) -> Result<Self> {
        let eval = |p: &Polynomial| -> RationalFunction {
            let mut acc = RationalFunction::zero(nvars);
            for t in p.terms() {
                let mut m = RationalFunction::constant(nvars, t.coeff.clone());
                for (v, &e) in values.iter().zip(&t.exps) {
                    if e > 0 {
                        let pw = RationalFunction {
                            num: v.num.pow(u32::from(e)),
                            den: v.den.pow(u32::from(e)),
                        };
                        m = m.mul(&pw);
                    }
                }
                acc = acc.add(&m);
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let num = self.num.display_with(names);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.display_with(names);
        let num = if self.num.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let simple_den =
            self.den.len() == 1 && self.den.terms()[0].exps.iter().filter(|&&e| e > 0).count() == 1;
        if simple_den {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }

    /// Bound display helper.
    pub fn show<'a>(&'a self, names: &'a [&'a str]) -> Shown<'a> {
        Shown { rf: self, names }
    }
}

pub struct Shown<'a> {
    rf: &'a RationalFunction,
    names: &'a [&'a str],
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rf.display_with(self.names))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                RationalFunction::$call(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(&self)
    }
}

/// Division panics on an identically zero divisor; use
/// [`RationalFunction::div`] for a fallible version.
impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::div(self, rhs).expect("division by zero rational function")
    }
}

/// Sums an iterator of rational functions over `nvars` variables.
pub fn sum<I: IntoIterator<Item = RationalFunction>>(nvars: usize, items: I) -> RationalFunction {
    items
        .into_iter()
        .fold(RationalFunction::zero(nvars), |acc, x| acc.add(&x))
}
