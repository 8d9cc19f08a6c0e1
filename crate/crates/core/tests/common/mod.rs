#![allow(dead_code)]

use std::sync::Arc;

use hamcheck_core::geometry::{Geometry, Metric};
use hamcheck_core::systems::QuasilinearSystem;
use hamcheck_core::tensor::Matrix;
use rand::Rng;
use symcore::{parse_expression, RationalFunction, VariableContext};

pub fn ctx(fields: &[&str], params: &[&str]) -> Arc<VariableContext> {
    Arc::new(VariableContext::new(fields, params).unwrap())
}

pub fn parse(ctx: &VariableContext, s: &str) -> RationalFunction {
    parse_expression(s, ctx).unwrap().normalize(ctx).unwrap()
}

pub fn matrix(ctx: &VariableContext, m: &[Vec<String>]) -> Matrix {
    m.iter()
        .map(|r| r.iter().map(|s| parse(ctx, s)).collect())
        .collect()
}

pub fn vector(ctx: &VariableContext, v: &[String]) -> Vec<RationalFunction> {
    v.iter().map(|s| parse(ctx, s)).collect()
}

pub fn strings(m: &[&[&str]]) -> Vec<Vec<String>> {
    m.iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

pub fn geometry(ctx: &Arc<VariableContext>, g: &[Vec<String>]) -> Arc<Geometry> {
    Geometry::new(Metric::new(ctx.clone(), matrix(ctx, g)).unwrap()).unwrap()
}

pub fn system(ctx: &Arc<VariableContext>, v: &[Vec<String>], w: &[String]) -> QuasilinearSystem {
    QuasilinearSystem::new(ctx.clone(), matrix(ctx, v), vector(ctx, w)).unwrap()
}

/// Random polynomial in `vars` with integer coefficients in `-3..=3` and
/// total degree at most `degree`.
pub fn random_poly(rng: &mut impl Rng, vars: &[&str], degree: u32, terms: usize) -> String {
    let mut out = Vec::new();
    for _ in 0..terms {
        let c: i32 = rng.gen_range(-3..=3);
        if c == 0 {
            continue;
        }
        let d = rng.gen_range(0..=degree);
        let mut t = format!("({c})");
        for _ in 0..d {
            t.push('*');
            t.push_str(vars[rng.gen_range(0..vars.len())]);
        }
        out.push(t);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out.join(" + ")
    }
}
