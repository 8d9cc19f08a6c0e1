use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcore::{
    int, parse_expression, rat, Coeff, Expr, RationalFunction, SymError, VarId, VariableContext,
};

fn ctx() -> VariableContext {
    VariableContext::new(&["u", "v"], &["k"]).unwrap()
}

/// Random trees over x, u, v, k with small constants. Quotients may have an
/// identically zero denominator; callers filter those out.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::constant(rat(n, d))),
        (0usize..4).prop_map(|i| Expr::var(VarId(i))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::difference(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::quotient(a, b)),
            (inner, -2i64..=3).prop_map(|(a, e)| Expr::power(a, e)),
        ]
    })
}

fn canon(e: &Expr) -> Option<RationalFunction> {
    match e.normalize(&ctx()) {
        Ok(rf) => Some(rf),
        Err(SymError::ZeroDenominator) => None,
        Err(other) => panic!("unexpected error {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differentiation_is_linear(e1 in arb_expr(), e2 in arb_expr(), a in -5i64..5, b in 1i64..5, var in 0usize..4) {
        let v = VarId(var);
        let combo = Expr::sum(
            Expr::product(Expr::integer(a), e1.clone()),
            Expr::product(Expr::constant(rat(1, b)), e2.clone()),
        );
        let (Some(_), Some(_)) = (canon(&e1), canon(&e2)) else { return Ok(()) };
        let lhs = canon(&combo.differentiate(v)).unwrap();
        let d1 = canon(&e1.differentiate(v)).unwrap();
        let d2 = canon(&e2.differentiate(v)).unwrap();
        let rhs = d1.scale(&int(a)).add(&d2.scale(&rat(1, b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule(e1 in arb_expr(), e2 in arb_expr(), var in 0usize..4) {
        let v = VarId(var);
        let (Some(c1), Some(c2)) = (canon(&e1), canon(&e2)) else { return Ok(()) };
        let lhs = canon(&Expr::product(e1.clone(), e2.clone()).differentiate(v)).unwrap();
        let d1 = canon(&e1.differentiate(v)).unwrap();
        let d2 = canon(&e2.differentiate(v)).unwrap();
        prop_assert_eq!(lhs, d1.mul(&c2).add(&c1.mul(&d2)));
    }

    #[test]
    fn tree_and_canonical_derivatives_agree(e in arb_expr(), var in 0usize..4) {
        let Some(c) = canon(&e) else { return Ok(()) };
        prop_assert_eq!(canon(&e.differentiate(VarId(var))).unwrap(), c.derivative(var));
    }

    #[test]
    fn normalize_is_idempotent_and_sound(e in arb_expr()) {
        let Some(c) = canon(&e) else { return Ok(()) };
        let rebuilt = Expr::from_rational_function(&c);
        prop_assert_eq!(canon(&rebuilt).unwrap(), c.clone());
        let diff = Expr::difference(e, rebuilt);
        prop_assert!(canon(&diff).unwrap().is_zero());
    }

    #[test]
    fn display_parse_round_trip(e in arb_expr()) {
        let ctx = ctx();
        let text = e.display(&ctx).to_string();
        let back = parse_expression(&text, &ctx).unwrap();
        match (canon(&e), canon(&back)) {
            (Some(a), Some(b)) => prop_assert_eq!(a, b),
            (None, None) => {}
            other => prop_assert!(false, "round trip changed definedness: {other:?}"),
        }
    }

    #[test]
    fn canonical_form_is_unique(e1 in arb_expr(), e2 in arb_expr()) {
        // e1 + e2 and e2 + e1 reach the same canonical form through different trees
        let (Some(_), Some(_)) = (canon(&e1), canon(&e2)) else { return Ok(()) };
        let a = canon(&Expr::sum(e1.clone(), e2.clone())).unwrap();
        let b = canon(&Expr::sum(e2, e1)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(!a.denominator().is_zero());
        prop_assert!(a.denominator().leading_coeff().unwrap() > &int(0));
    }
}

fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.4) {
            Expr::constant(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        } else {
            Expr::var(VarId(rng.gen_range(0..4)))
        };
    }
    let a = random_tree(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Expr::sum(a, random_tree(rng, depth - 1)),
        1 => Expr::difference(a, random_tree(rng, depth - 1)),
        2 => Expr::product(a, random_tree(rng, depth - 1)),
        3 => Expr::quotient(a, random_tree(rng, depth - 1)),
        _ => Expr::power(a, rng.gen_range(-2..=3)),
    }
}

#[test]
fn canonical_form_evaluates_like_the_raw_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut expressions = 0;
    while expressions < 50 {
        let e = random_tree(&mut rng, 4);
        let Some(c) = canon(&e) else { continue };
        expressions += 1;
        let mut points = 0;
        let mut attempts = 0;
        while points < 10 {
            attempts += 1;
            assert!(attempts < 1000, "no pole-free points found");
            let point: Vec<Coeff> = (0..4)
                .map(|_| rat(rng.gen_range(-30..=30), rng.gen_range(1..=7)))
                .collect();
            let (Ok(raw), Ok(can)) = (e.eval(&point), c.eval(&point)) else {
                continue;
            };
            assert_eq!(raw, can, "{}", e.display(&ctx()));
            points += 1;
        }
    }
}
