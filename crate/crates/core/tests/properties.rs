//! Property suites of the exact algebra.

mod common;
use common::suites;

#[test]
fn poisson_antisymmetry() {
    suites::poisson_antisymmetry().unwrap();
}

#[test]
fn poisson_jacobi() {
    suites::poisson_jacobi().unwrap();
}

#[test]
fn poisson_leibniz() {
    suites::poisson_leibniz().unwrap();
}

#[test]
fn parameters_are_central() {
    suites::parameters_are_central().unwrap();
}

#[test]
fn ring_axioms() {
    suites::ring_axioms().unwrap();
}

#[test]
fn operator_antisymmetry() {
    suites::operator_antisymmetry().unwrap();
}

#[test]
fn operator_jacobi() {
    suites::operator_jacobi().unwrap();
}

#[test]
fn operator_leibniz() {
    suites::operator_leibniz().unwrap();
}

#[test]
fn operator_associativity() {
    suites::operator_associativity().unwrap();
}

#[test]
fn normal_ordering_idempotent() {
    suites::normal_ordering_idempotent().unwrap();
}

#[test]
fn classical_limit_of_commutator() {
    suites::classical_limit_of_commutator().unwrap();
}

#[test]
fn quantize_round_trips_through_limit() {
    suites::quantize_round_trips_through_limit().unwrap();
}
