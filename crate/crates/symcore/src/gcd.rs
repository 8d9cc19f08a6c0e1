//! Multivariate polynomial GCD over the rationals.
//!
//! Recursive content / primitive-part decomposition with a primitive
//! pseudo-remainder sequence in a chosen main variable. Cheap structural cases
//! (monomial content, a variable occurring in only one operand, exact
//! divisibility) are peeled off first since they cover most of what rational
//! function normalization produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{Exponents, Polynomial};

/// Greatest common divisor, normalized to leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    gcd_inner(a, b).monic()
}

/// GCD of a list of polynomials (monic; zero for an empty or all-zero list).
pub fn gcd_all<'a, I: IntoIterator<Item = &'a Polynomial>>(nvars: usize, polys: I) -> Polynomial {
    let mut list: Vec<&Polynomial> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    list.sort_by_key(|p| p.len());
    let mut acc: Option<Polynomial> = None;
    for p in list {
        acc = Some(match acc {
            None => p.clone(),
            Some(g) => gcd_inner(&g, p),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            return Polynomial::one(nvars);
        }
    }
    acc.map(|g| g.monic())
        .unwrap_or_else(|| Polynomial::zero(nvars))
}

fn monomial_poly(nvars: usize, exps: Exponents) -> Polynomial {
    Polynomial::monomial(nvars, crate::poly::int(1), exps)
}

fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    a.len() == b.len() && a.monic() == b.monic()
}

fn gcd_inner(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let nvars = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(nvars);
    }

    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m: Exponents = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let mono = monomial_poly(nvars, m);

    if a1.is_constant() || b1.is_constant() {
        return mono;
    }
    if proportional(&a1, &b1) {
        return mono.mul(&a1);
    }
    if b1.len() <= a1.len() {
        if a1.exact_div(&b1).is_some() {
            return mono.mul(&b1);
        }
    } else if b1.exact_div(&a1).is_some() {
        return mono.mul(&a1);
    }

    let va = a1.vars();
    let vb = b1.vars();
    if let Some(&x) = va.iter().find(|v| !vb.contains(v)) {
        return mono.mul(&gcd_with_coefficients(&b1, &a1, x));
    }
    if let Some(&x) = vb.iter().find(|v| !va.contains(v)) {
        return mono.mul(&gcd_with_coefficients(&a1, &b1, x));
    }

    // same variable set from here on; pick the main variable of least degree
    let main = *va
        .iter()
        .min_by_key(|&&v| (a1.degree_in(v).max(b1.degree_in(v)), v))
        .expect("non-constant polynomial has a variable");
    let ua = a1.to_univariate(main);
    let ub = b1.to_univariate(main);
    let ca = content(nvars, &ua);
    let cb = content(nvars, &ub);
    let cg = gcd_inner(&ca, &cb);
    let pa = divide_coefficients(&ua, &ca);
    let pb = divide_coefficients(&ub, &cb);
    let pg = if modular_degree_bound(&pa, &pb) == Some(0) {
        vec![Polynomial::one(nvars)]
    } else {
        primitive_prs(pa, pb, nvars)
    };
    mono.mul(&cg)
        .mul(&Polynomial::from_univariate(&pg, main, nvars))
}

/// gcd(b, p) where `x` occurs in `p` but not in `b`: the gcd cannot involve
/// `x`, so it divides every coefficient of `p` with respect to `x`.
fn gcd_with_coefficients(b: &Polynomial, p: &Polynomial, x: usize) -> Polynomial {
    let mut coeffs = p.to_univariate(x);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.len());
    let mut g = b.clone();
    for c in &coeffs {
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return Polynomial::one(b.nvars());
        }
    }
    g
}

fn content(nvars: usize, coeffs: &[Polynomial]) -> Polynomial {
    let mut list: Vec<&Polynomial> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    list.sort_by_key(|c| c.len());
    let mut g = list[0].clone();
    for c in &list[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_inner(&g, c);
    }
    if g.is_constant() {
        Polynomial::one(nvars)
    } else {
        g
    }
}

fn divide_coefficients(coeffs: &[Polynomial], by: &Polynomial) -> Vec<Polynomial> {
    if by.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.exact_div(by).expect("content divides every coefficient"))
        .collect()
}

/// Modulus for the coprimality test: the Mersenne prime 2^61 - 1.
const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn big_mod(n: &BigInt) -> u64 {
    let m = BigInt::from(PRIME);
    let r = n.mod_floor(&m);
    r.try_into().expect("reduced below the modulus")
}

/// Image of a polynomial at `point` modulo [`PRIME`]; `None` when a
/// coefficient denominator vanishes there.
fn eval_mod(p: &Polynomial, point: &[u64]) -> Option<u64> {
    let mut acc = 0u64;
    for t in p.terms() {
        let den = big_mod(t.coeff.denom());
        if den == 0 {
            return None;
        }
        let mut v = mul_mod(big_mod(t.coeff.numer()), inv_mod(den));
        for (x, &e) in point.iter().zip(&t.exps) {
            if e > 0 {
                v = mul_mod(v, pow_mod(*x, e as u64));
            }
        }
        acc = (acc + v) % PRIME;
    }
    Some(acc)
}

/// Degree of the gcd of two univariate polynomials over GF(PRIME);
/// coefficients are indexed by degree with nonzero leading entries.
fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        trim(&mut b);
        if b.is_empty() {
            return a.len() - 1;
        }
        let inv = inv_mod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonempty"), inv);
            let shift = a.len() - b.len();
            for (k, bc) in b.iter().enumerate() {
                a[k + shift] = (a[k + shift] + PRIME - mul_mod(f, *bc)) % PRIME;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Upper bound for the degree, in the main variable, of the gcd of two
/// polynomials given by their coefficient lists. Reducing modulo a prime
/// and evaluating the other variables can only enlarge the gcd as long as
/// both leading coefficients survive, so a bound of zero proves the
/// primitive parts coprime. Evaluation points are fixed, so results are
/// deterministic.
fn modular_degree_bound(a: &[Polynomial], b: &[Polynomial]) -> Option<usize> {
    let nvars = a[0].nvars();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..3 {
        let point: Vec<u64> = (0..nvars)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (state >> 3) % PRIME
            })
            .collect();
        let image = |p: &[Polynomial]| {
            p.iter()
                .map(|c| eval_mod(c, &point))
                .collect::<Option<Vec<u64>>>()
        };
        let (Some(ia), Some(ib)) = (image(a), image(b)) else {
            continue;
        };
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        return Some(univariate_gcd_degree(ia, ib));
    }
    None
}

/// Rescales so that all rational coefficients become coprime integers.
/// Polynomial content ignores numeric factors, and without this the
/// pseudo-remainder coefficients grow exponentially.
fn integer_primitive(coeffs: Vec<Polynomial>) -> Vec<Polynomial> {
    let (mut num, mut den) = (BigInt::zero(), BigInt::one());
    for t in coeffs.iter().flat_map(|c| c.terms()) {
        num = num.gcd(t.coeff.numer());
        den = den.lcm(t.coeff.denom());
    }
    if num.is_zero() || (num.is_one() && den.is_one()) {
        return coeffs;
    }
    let factor = BigRational::new(den, num);
    coeffs.iter().map(|c| c.scale(&factor)).collect()
}

fn trim(mut p: Vec<Polynomial>) -> Vec<Polynomial> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `lc(b)^(deg a - deg b + 1) a mod b` for univariate polynomials with
/// polynomial coefficients; `deg a >= deg b`.
fn pseudo_remainder(a: &[Polynomial], b: &[Polynomial], nvars: usize) -> Vec<Polynomial> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    for top in (db..a.len()).rev() {
        let lr = r[top].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        if !lr.is_zero() {
            let shift = top - db;
            for (k, bc) in b.iter().enumerate() {
                r[k + shift] = r[k + shift].sub(&bc.mul(&lr));
            }
        }
        debug_assert!(r[top].is_zero());
        r.pop();
    }
    let r = trim(r);
    if r.is_empty() {
        vec![Polynomial::zero(nvars)]
    } else {
        r
    }
}

fn primitive_prs(a: Vec<Polynomial>, b: Vec<Polynomial>, nvars: usize) -> Vec<Polynomial> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        if b.len() == 1 {
            // degree zero in the main variable; both are primitive
            return vec![Polynomial::one(nvars)];
        }
        let r = pseudo_remainder(&a, &b, nvars);
        if r.len() == 1 && r[0].is_zero() {
            return b;
        }
        if r.len() == 1 {
            return vec![Polynomial::one(nvars)];
        }
        let c = content(nvars, &r);
        let r = integer_primitive(divide_coefficients(&r, &c));
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn vars(n: usize) -> Vec<Polynomial> {
        (0..n).map(|i| Polynomial::var(n, i)).collect()
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let v = vars(3);
        let (u, w, z) = (&v[0], &v[1], &v[2]);
        let common = u.sub(w).mul(&z.add(&Polynomial::constant(3, int(2))));
        let a = common.mul(&u.add(&w.mul(w)));
        let b = common.mul(&u.mul(z).sub(&Polynomial::one(3)));
        assert_eq!(gcd(&a, &b), common.monic());
    }

    /// A dense cubic determinant against one of its cofactors; the
    /// remainder sequence passes through univariate stages with purely
    /// numeric coefficients.
    #[test]
    fn numeric_remainders_stay_small() {
        let ctx = crate::VariableContext::new(&["u", "v", "w"], &[] as &[&str]).unwrap();
        let p = |s: &str| {
            crate::parse_expression(s, &ctx)
                .unwrap()
                .normalize(&ctx)
                .unwrap()
                .numerator()
                .clone()
        };
        let det = p("-u^3*v*w^2 - 4*u*v^3*w^2 - v^4*w^2 - u^4*v + u^2*w^3 - u*v^4 - 12*u*v^3*w \
             + u*v^2*w^2 + 4*v^2*w^3 + 9*u^4 - u^3*v + u^3*w + u^2*v^2 - 2*u^2*w^2 + 3*u*v*w^2 - v^4 \
             - 8*v^2*w^2 - v*w^3 - 2*u^3 - 6*u^2*v + u^2*w + u*v^2 - u*v*w + 2*v*w^2 - 3*w^3 - 29*u^2 \
             + 5*u*v - 3*u*w - v*w + 6*w^2 + 6*u + 2*v - 3*w + 6");
        let a = p("v*w^2 + u*v + 6*u*w + v");
        assert!(gcd(&a, &det).is_one());
        let f = p("u*w - v + 2");
        assert_eq!(gcd(&a.mul(&f), &det.mul(&f)), f.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let v = vars(2);
        let a = v[0].add(&v[1]);
        let b = v[0].sub(&v[1]);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_content_is_kept() {
        let v = vars(2);
        let a = v[0].mul(&v[0]).mul(&v[1]);
        let b = v[0].mul(&v[1]).mul(&v[1]).add(&v[0].mul(&v[1]));
        assert_eq!(gcd(&a, &b), v[0].mul(&v[1]));
    }

    #[test]
    fn variable_in_one_operand_only() {
        let v = vars(3);
        // a = (u+1)(w+u), b = (u+1) v
        let u1 = v[0].add(&Polynomial::one(3));
        let a = u1.mul(&v[2].add(&v[0]));
        let b = u1.mul(&v[1]);
        assert_eq!(gcd(&a, &b), u1);
    }

    #[test]
    fn gcd_all_folds() {
        let v = vars(2);
        let f = v[0].sub(&v[1]);
        let list = [f.mul(&v[0]), f.mul(&v[1]), f.mul(&f)];
        assert_eq!(gcd_all(2, list.iter()), f.monic());
        assert!(gcd_all(2, [].iter()).is_zero());
    }

    #[test]
    fn higher_degree_prs() {
        let v = vars(2);
        let one = Polynomial::one(2);
        // common factor u^2 + u v + 1, cofactors need a real PRS
        let common = v[0].mul(&v[0]).add(&v[0].mul(&v[1])).add(&one);
        let a = common.mul(&v[0].pow(3).add(&v[1]).add(&one));
        let b = common.mul(&v[0].mul(&v[0]).sub(&v[1].pow(2)).add(&v[0]));
        assert_eq!(gcd(&a, &b), common.monic());
    }
}
