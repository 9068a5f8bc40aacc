//! Randomized algebraic identities, 100 cases each. Shared by the core property tests and the acceptance run.
#![allow(dead_code)]
use std::sync::Arc;

use hchain_core::phase::pb;
use hchain_core::weyl::{comm, mul, normalize};
use hchain_core::{DiffOperator, Gaussian, Monomial, PhasePoly, Poly, Scalar, VarTable};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

fn table() -> Arc<VarTable> {
    VarTable::new(&["x1", "x2"], &["p1", "p2"], &["k", "hbar"]).unwrap()
}

// x1 x2 p1 p2 k hbar; positions may be negative
fn exponent() -> impl Strategy<Value = Vec<i32>> {
    (-2i32..=2, -1i32..=2, 0i32..=2, 0i32..=2, 0i32..=1).prop_map(|(a, b, c, d, e)| vec![a, b, c, d, e, 0])
}

fn terms(max: usize) -> impl Strategy<Value = Vec<(Vec<i32>, i64, i64)>> {
    prop::collection::vec((exponent(), -5i64..=5, -3i64..=3), 1..=max)
}

fn phase(t: &[(Vec<i32>, i64, i64)]) -> PhasePoly {
    let vt = table();
    Poly::from_terms(&vt, t.iter().map(|(e, c, _)| (Monomial(e.clone()), Scalar::from_int(*c))))
}

fn operator(t: &[(Vec<i32>, i64, i64)]) -> DiffOperator {
    let vt = table();
    let g = t.iter().map(|(e, re, im)| {
        let mut e = e.clone();
        // an ħ per derivative keeps the operators in the image of quantization
        e[5] = e[2] + e[3];
        (Monomial(e), Gaussian::new(Scalar::from_int(*re), Scalar::from_int(*im)))
    });
    DiffOperator::from_normal_poly(Poly::from_terms(&vt, g))
}

pub const CASES: u32 = 100;

fn run<S: Strategy>(s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let cfg = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new(cfg).run(&s, f).map_err(|e| e.to_string())
}

pub fn poisson_antisymmetry() -> Result<(), String> {
    run((terms(4), terms(4)), |(f, g)| {
        let (f, g) = (phase(&f), phase(&g));
        prop_assert_eq!(pb(&f, &g), pb(&g, &f).neg_poly());
        Ok(())
    })
}

pub fn poisson_jacobi() -> Result<(), String> {
    run((terms(3), terms(3), terms(3)), |(f, g, h)| {
        let (f, g, h) = (phase(&f), phase(&g), phase(&h));
        let s = pb(&f, &pb(&g, &h)).add_poly(&pb(&g, &pb(&h, &f))).add_poly(&pb(&h, &pb(&f, &g)));
        prop_assert!(s.is_zero());
        Ok(())
    })
}

pub fn poisson_leibniz() -> Result<(), String> {
    run((terms(3), terms(3), terms(3)), |(f, g, h)| {
        let (f, g, h) = (phase(&f), phase(&g), phase(&h));
        let lhs = pb(&f, &g.mul_poly(&h));
        let rhs = pb(&f, &g).mul_poly(&h).add_poly(&g.mul_poly(&pb(&f, &h)));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn parameters_are_central() -> Result<(), String> {
    run(terms(4), |f| {
        let f = phase(&f);
        let vt = table();
        prop_assert!(pb(&f, &PhasePoly::var(&vt, "k")).is_zero());
        prop_assert!(pb(&f, &PhasePoly::var(&vt, "hbar")).is_zero());
        Ok(())
    })
}

pub fn ring_axioms() -> Result<(), String> {
    run((terms(3), terms(3), terms(3)), |(f, g, h)| {
        let (f, g, h) = (phase(&f), phase(&g), phase(&h));
        prop_assert_eq!(f.mul_poly(&g).mul_poly(&h), f.mul_poly(&g.mul_poly(&h)));
        prop_assert_eq!(f.mul_poly(&g.add_poly(&h)), f.mul_poly(&g).add_poly(&f.mul_poly(&h)));
        prop_assert_eq!(f.mul_poly(&g), g.mul_poly(&f));
        prop_assert!(f.sub_poly(&f).is_zero());
        Ok(())
    })
}

pub fn operator_antisymmetry() -> Result<(), String> {
    run((terms(3), terms(3)), |(a, b)| {
        let (a, b) = (operator(&a), operator(&b));
        prop_assert_eq!(comm(&a, &b), comm(&b, &a).neg());
        Ok(())
    })
}

pub fn operator_jacobi() -> Result<(), String> {
    run((terms(2), terms(2), terms(2)), |(a, b, c)| {
        let (a, b, c) = (operator(&a), operator(&b), operator(&c));
        let s = comm(&a, &comm(&b, &c)).add(&comm(&b, &comm(&c, &a))).add(&comm(&c, &comm(&a, &b)));
        prop_assert!(s.is_zero());
        Ok(())
    })
}

pub fn operator_leibniz() -> Result<(), String> {
    run((terms(2), terms(2), terms(2)), |(a, b, c)| {
        let (a, b, c) = (operator(&a), operator(&b), operator(&c));
        let lhs = comm(&a, &mul(&b, &c));
        let rhs = mul(&comm(&a, &b), &c).add(&mul(&b, &comm(&a, &c)));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn operator_associativity() -> Result<(), String> {
    run((terms(2), terms(2), terms(2)), |(a, b, c)| {
        let (a, b, c) = (operator(&a), operator(&b), operator(&c));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        Ok(())
    })
}

pub fn normal_ordering_idempotent() -> Result<(), String> {
    run((terms(3), terms(3)), |(a, b)| {
        let (a, b) = (operator(&a), operator(&b));
        let once = normalize(&[a.clone(), b.clone()]);
        let twice = normalize(std::slice::from_ref(&once));
        prop_assert_eq!(&once, &twice);
        let one = DiffOperator::one(a.table());
        prop_assert_eq!(normalize(&[one.clone(), once.clone(), one]), once.clone());
        let rebuilt = DiffOperator::from_normal_poly(once.as_poly().clone());
        prop_assert_eq!(rebuilt, once);
        Ok(())
    })
}

pub fn classical_limit_of_commutator() -> Result<(), String> {
    run((terms(3), terms(3)), |(f, g)| {
        let (f, g) = (phase(&f), phase(&g));
        let c = comm(&DiffOperator::quantize(&f), &DiffOperator::quantize(&g));
        let by = c.symbol_by_hbar();
        // [F, G] = iħ{F, G} + O(ħ²)
        prop_assert!(by.keys().all(|&e| e >= 1));
        let first = by.get(&1).cloned().unwrap_or_else(|| Poly::zero(&table()));
        let expected = pb(&f, &g).to_gaussian().scale(&Gaussian::i());
        prop_assert_eq!(first, expected);
        Ok(())
    })
}

pub fn quantize_round_trips_through_limit() -> Result<(), String> {
    run(terms(4), |f| {
        let f = phase(&f);
        prop_assert_eq!(DiffOperator::quantize(&f).classical_limit().unwrap(), f);
        Ok(())
    })
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const ALL: &[Suite] = &[
    ("poisson_antisymmetry", poisson_antisymmetry),
    ("poisson_jacobi", poisson_jacobi),
    ("poisson_leibniz", poisson_leibniz),
    ("parameters_are_central", parameters_are_central),
    ("ring_axioms", ring_axioms),
    ("operator_antisymmetry", operator_antisymmetry),
    ("operator_jacobi", operator_jacobi),
    ("operator_leibniz", operator_leibniz),
    ("operator_associativity", operator_associativity),
    ("normal_ordering_idempotent", normal_ordering_idempotent),
    ("classical_limit_of_commutator", classical_limit_of_commutator),
    ("quantize_round_trips_through_limit", quantize_round_trips_through_limit),
];
