//! Fitting of ternary (quadratic / cubic) algebras, Casimirs and generating functions.
//!
//! Relations, with `C = {A,B}` (or `[A,B]`) and `{·,·}` the symmetrized products:
//!
//! quadratic: `{A,C} = αA² + βB² + γ{A,B} + δA + εB + ζ`,
//! `{B,C} = aA² − γB² − α{A,B} + dA − δB + z`;
//!
//! cubic: `{A,C} = aA³ + αA² + β{A,B} + γA + δB + ε`,
//! `{B,C} = μA³ + νA² − βB² − a{A,A,B} − α{A,B} + ξA − γB + ζ`.
//!
//! Every constant is a polynomial in `H` with parameter coefficients, stored
//! as a polynomial over the system table extended by the symbol `H`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::phase::{substitute, Bindings};
use crate::poly::{PhasePoly, Poly};
use crate::ring::{fitting_order, triangular_solve, Assoc, BracketRing};
use crate::scalar::{Gaussian, Scalar};
use crate::systems::{Family, Regime, SystemDef};
use crate::vars::VarTable;

/// Symbol used for the Hamiltonian inside structure constants.
pub const H_SYMBOL: &str = "H";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Elem {
    One,
    A,
    B,
    A2,
    B2,
    A3,
    SymAB,
    SymAAB,
}

struct Slot {
    name: &'static str,
    elem: Elem,
    max_h: u32,
    /// For second-relation terms fixed by the first relation: the constant they must negate.
    tied_to: Option<&'static str>,
}

const fn slot(name: &'static str, elem: Elem, max_h: u32) -> Slot {
    Slot { name, elem, max_h, tied_to: None }
}

const fn tied(name: &'static str, elem: Elem, max_h: u32, to: &'static str) -> Slot {
    Slot { name, elem, max_h, tied_to: Some(to) }
}

fn relations(family: Family) -> [Vec<Slot>; 2] {
    use Elem::*;
    match family {
        Family::Quadratic => [
            alloc::vec![
                slot("alpha", A2, 0),
                slot("beta", B2, 0),
                slot("gamma", SymAB, 0),
                slot("delta", A, 1),
                slot("epsilon", B, 1),
                slot("zeta", One, 2),
            ],
            alloc::vec![
                slot("a", A2, 0),
                tied("B^2 in {B,C}", B2, 0, "gamma"),
                tied("{A,B} in {B,C}", SymAB, 0, "alpha"),
                slot("d", A, 1),
                tied("B in {B,C}", B, 1, "delta"),
                slot("z", One, 2),
            ],
        ],
        Family::Cubic => [
            alloc::vec![
                slot("a", A3, 0),
                slot("alpha", A2, 1),
                slot("beta", SymAB, 0),
                slot("gamma", A, 2),
                slot("delta", B, 1),
                slot("epsilon", One, 3),
            ],
            alloc::vec![
                slot("mu", A3, 1),
                slot("nu", A2, 2),
                tied("B^2 in {B,C}", B2, 0, "beta"),
                tied("{A,A,B} in {B,C}", SymAAB, 0, "a"),
                tied("{A,B} in {B,C}", SymAB, 1, "alpha"),
                slot("xi", A, 3),
                tied("B in {B,C}", B, 2, "gamma"),
                slot("zeta", One, 4),
            ],
        ],
    }
}

/// A tied second-relation coefficient compared with the negated first-relation constant.
#[derive(Clone, Debug, PartialEq)]
pub struct TieCheck {
    pub term: String,
    pub constant: String,
    pub holds: bool,
}

/// Fitted structure constants of a ternary algebra; the residual is zero by construction.
#[derive(Clone, Debug)]
pub struct TripleAlgebraFit {
    pub family: Family,
    pub regime: Regime,
    /// System table extended by `H`.
    pub table: Arc<VarTable>,
    /// Constants in canonical order, each a polynomial in `H` and parameters.
    pub constants: Vec<(String, PhasePoly)>,
    pub ties: Vec<TieCheck>,
}

impl TripleAlgebraFit {
    pub fn get(&self, name: &str) -> &PhasePoly {
        &self
            .constants
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("no structure constant `{name}`"))
            .1
    }

    pub fn h_index(&self) -> usize {
        self.table.index(H_SYMBOL).expect("extended table")
    }

    /// Constant as a ring element, with `H` replaced by the Hamiltonian.
    pub fn element<R: BracketRing>(&self, name: &str, h: &R) -> R {
        h_poly_element(self.get(name), self.h_index(), h)
    }
}

/// Extend a system table by the symbol `H`.
pub fn extended_table(vt: &VarTable) -> Arc<VarTable> {
    vt.extend_params(&[H_SYMBOL]).expect("H is a fresh symbol")
}

/// Evaluate `Σ_k c_k H^k` (c_k parameter-only, over the extended table) in the ring.
pub fn h_poly_element<R: BracketRing>(c: &PhasePoly, h_index: usize, h: &R) -> R {
    let vt = h.table().clone();
    let mut acc = R::zero_in(&vt);
    for (k, ck) in c.collect_in(h_index) {
        let coef = ck.retable(&vt).expect("parameters of the system table");
        acc = acc.plus(&h.pow(k as u32).scale_central(&coef));
    }
    acc
}

fn element<R: BracketRing>(e: Elem, a: &R, b: &R) -> R {
    let vt = a.table();
    match e {
        Elem::One => R::one_in(vt),
        Elem::A => a.clone(),
        Elem::B => b.clone(),
        Elem::A2 => a.times(a),
        Elem::B2 => b.times(b),
        Elem::A3 => a.times(a).times(a),
        Elem::SymAB => R::sym2(a, b),
        Elem::SymAAB => R::sym_aab(a, b),
    }
}

/// Coefficient in the operator term map back to a real parameter polynomial over `ext`.
fn real_param(c: &Poly<Gaussian>, ext: &Arc<VarTable>, what: &str) -> Result<PhasePoly, AlgebraError> {
    if !c.is_real() {
        return Err(AlgebraError::InconsistentFit {
            relation: format!("reality of {what}"),
            residual: format!("{}", c.imag_part()),
        });
    }
    Ok(c.real_part().retable(ext).expect("extended table contains all symbols"))
}

/// Express `target` as `Σ_slots c_slot(H) · element_slot` and return the constants.
fn fit_relation<R: BracketRing>(
    sys: &SystemDef<R>,
    target: &R,
    slots: &[Slot],
    relation: &str,
    ext: &Arc<VarTable>,
    h_pows: &[R],
) -> Result<Vec<PhasePoly>, AlgebraError> {
    let order = fitting_order(&sys.table, &sys.a_dofs);
    let mut elems = Vec::new();
    let mut owner = Vec::new();
    for (si, s) in slots.iter().enumerate() {
        let base = element(s.elem, &sys.a, &sys.b);
        for k in 0..=s.max_h {
            elems.push(h_pows[k as usize].times(&base));
            owner.push((si, k));
        }
    }
    let sol = triangular_solve(target, &elems, &order)?;
    if !sol.residual.is_zero() {
        return Err(AlgebraError::InconsistentFit {
            relation: relation.to_string(),
            residual: format!("{}", sol.residual),
        });
    }
    let hi = ext.index(H_SYMBOL).expect("extended table");
    let mut out: Vec<PhasePoly> = slots.iter().map(|_| PhasePoly::zero(ext)).collect();
    for ((si, k), q) in owner.into_iter().zip(sol.coeffs) {
        let c = real_param(&q, ext, slots[si].name)?;
        out[si] = out[si].add_poly(&c.mul_poly(&PhasePoly::var_pow(ext, hi, k as i32)));
    }
    Ok(out)
}

/// Fit both ternary relations of `sys`.
pub fn fit_ternary<R: BracketRing>(sys: &SystemDef<R>) -> Result<TripleAlgebraFit, AlgebraError> {
    let ext = extended_table(&sys.table);
    let c = sys.c();
    let ac = sys.a.bracket(&c);
    let bc = sys.b.bracket(&c);
    let [rel1, rel2] = relations(sys.kind.family);
    let max_h = rel1.iter().chain(rel2.iter()).map(|s| s.max_h).max().unwrap_or(0);
    let mut h_pows = alloc::vec![R::one_in(&sys.table)];
    for k in 1..=max_h as usize {
        let next = h_pows[k - 1].times(&sys.h);
        h_pows.push(next);
    }
    let c1 = fit_relation(sys, &ac, &rel1, "{A,C}", &ext, &h_pows)?;
    let c2 = fit_relation(sys, &bc, &rel2, "{B,C}", &ext, &h_pows)?;
    let mut constants: Vec<(String, PhasePoly)> =
        rel1.iter().zip(c1).map(|(s, c)| (s.name.to_string(), c)).collect();
    let mut ties = Vec::new();
    for (s, c) in rel2.iter().zip(c2) {
        match s.tied_to {
            Some(to) => {
                let want = constants.iter().find(|(n, _)| n == to).expect("tied constant").1.neg_poly();
                ties.push(TieCheck { term: s.name.to_string(), constant: to.to_string(), holds: c == want });
                if c != want {
                    return Err(AlgebraError::InconsistentFit {
                        relation: format!("{} = -{}", s.name, to),
                        residual: format!("{}", c.sub_poly(&want)),
                    });
                }
            }
            None => constants.push((s.name.to_string(), c)),
        }
    }
    Ok(TripleAlgebraFit { family: sys.kind.family, regime: sys.kind.regime, table: ext, constants, ties })
}

/// Casimir of a fitted algebra, reduced to a polynomial in `H`.
#[derive(Clone, Debug)]
pub struct CasimirResult<R> {
    pub k: R,
    /// `Σ k_i H^i` over the extended table.
    pub reduction: PhasePoly,
    /// Regeneration identities `½∂K/∂C = C`, `½∂K/∂A = {B,C}`, `½∂K/∂B = {C,A}` (classical only).
    pub regeneration: Option<[bool; 3]>,
}

impl<R> CasimirResult<R> {
    /// Coefficient `k_i` of `H^i`.
    pub fn coefficient(&self, i: i32) -> PhasePoly {
        let hi = self.reduction.table().index(H_SYMBOL).expect("extended table");
        self.reduction.collect_in(hi).remove(&i).unwrap_or_else(|| PhasePoly::zero(self.reduction.table()))
    }
}

fn s(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Assemble the Casimir element from `A`, `B`, `C` and the constants.
fn casimir_formula<R: Assoc>(
    family: Family,
    regime: Regime,
    zeta_sign: i64,
    a: &R,
    b: &R,
    c: &R,
    k: &dyn Fn(&str) -> R,
) -> R {
    let sc = |x: &R, n: i64, d: i64| x.scale_central(&PhasePoly::from_scalar(x.table(), s(n, d)));
    let a2 = a.times(a);
    let a3 = a2.times(a);
    let b2 = b.times(b);
    match (family, regime) {
        (Family::Cubic, Regime::Classical) => {
            let terms = [
                sc(&k("a").times(&R::sym_aaab(a, b)), -1, 2),
                sc(&k("alpha").times(&R::sym_aab(a, b)), -2, 3),
                sc(&k("beta").times(&R::sym_abb(a, b)), -2, 3),
                sc(&k("gamma").times(&R::sym2(a, b)), -1, 1),
                sc(&k("nu").times(&a3), 2, 3),
                sc(&k("delta").times(&b2), -1, 1),
                sc(&k("mu").times(&a3.times(a)), 1, 2),
                sc(&k("epsilon").times(b), -2, 1),
                k("xi").times(&a2),
                sc(&k("zeta").times(a), 2, 1),
            ];
            terms.iter().fold(c.times(c), |acc, t| acc.plus(t))
        }
        (Family::Quadratic, Regime::Classical) => {
            let terms = [
                sc(&k("a").times(&a3), 2, 3),
                sc(&k("alpha").times(&R::sym_aab(a, b)), -2, 3),
                sc(&k("gamma").times(&R::sym_abb(a, b)), -2, 3),
                sc(&k("delta").times(&R::sym2(a, b)), -1, 1),
                k("d").times(&a2),
                sc(&k("epsilon").times(&b2), -1, 1),
                sc(&k("z").times(a), 2, 1),
                sc(&k("zeta").times(b), -2, 1),
            ];
            terms.iter().fold(c.times(c), |acc, t| acc.plus(t))
        }
        (Family::Quadratic, Regime::Quantum) => {
            let (al, be, ga, de, ep, ze, aa, d, z) =
                (k("alpha"), k("beta"), k("gamma"), k("delta"), k("epsilon"), k("zeta"), k("a"), k("d"), k("z"));
            let a2b = a2.times(b).plus(&b.times(&a2));
            let ab2 = a.times(&b2).plus(&b2.times(a));
            let t_ab = al.times(&ga).minus(&de).plus(&sc(&aa.times(&be), 1, 3));
            let t_b2 = ga.times(&ga).minus(&ep).minus(&sc(&al.times(&be), 1, 3));
            let t_b = sc(&ga.times(&de), -1, 1).plus(&sc(&ze, 2 * zeta_sign, 1)).minus(&sc(&be.times(&d), 1, 3));
            let t_a2 = d.plus(&sc(&aa.times(&ga), 1, 3)).plus(&al.times(&al));
            let t_a = sc(&aa.times(&ep), 1, 3).plus(&al.times(&de)).plus(&sc(&z, 2, 1));
            let terms = [
                al.times(&a2b).neg_like(),
                ga.times(&ab2).neg_like(),
                t_ab.times(&R::sym2(a, b)),
                sc(&be.times(&b2.times(b)), -2, 3),
                t_b2.times(&b2),
                t_b.times(b),
                sc(&aa.times(&a3), 2, 3),
                t_a2.times(&a2),
                t_a.times(a),
            ];
            terms.iter().fold(c.times(c), |acc, t| acc.plus(t))
        }
        (Family::Cubic, Regime::Quantum) => {
            let (aa, al, be, ga, de, ep, mu, nu, xi, ze) = (
                k("a"),
                k("alpha"),
                k("beta"),
                k("gamma"),
                k("delta"),
                k("epsilon"),
                k("mu"),
                k("nu"),
                k("xi"),
                k("zeta"),
            );
            let m = |x: &R, y: &R| x.times(y);
            let be2 = m(&be, &be);
            let aa2 = m(&aa, &aa);
            // (2β²/3 − δ) B²
            let c_b2 = sc(&be2, 2, 3).minus(&de);
            // (2αβ − 6γ + a(β² − 3δ))/6 {A,B}
            let c_ab = sc(
                &sc(&m(&al, &be), 2, 1).minus(&sc(&ga, 6, 1)).plus(&m(&aa, &be2.minus(&sc(&de, 3, 1)))),
                1,
                6,
            );
            // (4βγ − 2αδ + aβδ − 12ε)/6 B
            let c_b = sc(
                &sc(&m(&be, &ga), 4, 1)
                    .minus(&sc(&m(&al, &de), 2, 1))
                    .plus(&m(&m(&aa, &be), &de))
                    .minus(&sc(&ep, 12, 1)),
                1,
                6,
            );
            // (3a² + μ)/2 A⁴
            let c_a4 = sc(&sc(&aa2, 3, 1).plus(&mu), 1, 2);
            // (2aα − a²β/2 + βμ + 2ν/3) A³
            let c_a3 = sc(&m(&aa, &al), 2, 1)
                .minus(&sc(&m(&aa2, &be), 1, 2))
                .plus(&m(&be, &mu))
                .plus(&sc(&nu, 2, 3));
            // (4α² − aαβ + 6aγ + a²(β² − 3δ) − β²μ + 3δμ + 4βν + 6ξ)/6 A²
            let c_a2 = sc(
                &sc(&m(&al, &al), 4, 1)
                    .minus(&m(&m(&aa, &al), &be))
                    .plus(&sc(&m(&aa, &ga), 6, 1))
                    .plus(&m(&aa2, &be2.minus(&sc(&de, 3, 1))))
                    .minus(&m(&be2, &mu))
                    .plus(&sc(&m(&de, &mu), 3, 1))
                    .plus(&sc(&m(&be, &nu), 4, 1))
                    .plus(&sc(&xi, 6, 1)),
                1,
                6,
            );
            // (4αγ + aβγ − 2aαδ + a²βδ + 12ζ − βδμ + 2δν + 2βξ)/6 A
            let c_a = sc(
                &sc(&m(&al, &ga), 4, 1)
                    .plus(&m(&m(&aa, &be), &ga))
                    .minus(&sc(&m(&m(&aa, &al), &de), 2, 1))
                    .plus(&m(&m(&aa2, &be), &de))
                    .plus(&sc(&ze, 12, 1))
                    .minus(&m(&m(&be, &de), &mu))
                    .plus(&sc(&m(&de, &nu), 2, 1))
                    .plus(&sc(&m(&be, &xi), 2, 1)),
                1,
                6,
            );
            let terms = [
                sc(&aa.times(&R::sym_aaab(a, b)), -1, 2),
                sc(&al.times(&R::sym_aab(a, b)), -2, 3),
                sc(&be.times(&R::sym_abb(a, b)), -2, 3),
                c_b2.times(&b2),
                c_ab.times(&R::sym2(a, b)),
                c_b.times(b),
                c_a4.times(&a3.times(a)),
                c_a3.times(&a3),
                c_a2.times(&a2),
                c_a.times(a),
            ];
            terms.iter().fold(c.times(c), |acc, t| acc.plus(t))
        }
    }
}

trait NegLike {
    fn neg_like(&self) -> Self;
}

impl<R: Assoc> NegLike for R {
    fn neg_like(&self) -> Self {
        R::zero_in(self.table()).minus(self)
    }
}

/// Casimir element assembled from `A`, `B`, `C` and constants in any associative realization.
pub fn casimir_element<R: Assoc>(family: Family, regime: Regime, a: &R, b: &R, c: &R, k: &dyn Fn(&str) -> R) -> R {
    casimir_formula(family, regime, -1, a, b, c, k)
}

/// Build the Casimir from the closed formula of the family/regime, verify it
/// commutes with `A` and `B`, and reduce it to a polynomial in `H`.
pub fn build_casimir<R: BracketRing>(
    fit: &TripleAlgebraFit,
    sys: &SystemDef<R>,
) -> Result<CasimirResult<R>, AlgebraError> {
    let c = sys.c();
    let k_of = |n: &str| fit.element(n, &sys.h);
    let kk = casimir_formula(fit.family, fit.regime, -1, &sys.a, &sys.b, &c, &k_of);
    for (name, g) in [("A", &sys.a), ("B", &sys.b)] {
        let br = kk.bracket(g);
        if !br.is_zero() {
            return Err(AlgebraError::CentralityViolation { generator: name.to_string(), bracket: br.render() });
        }
    }
    let reduction = reduce_in_h(&kk, sys, &fit.table)?;
    let regeneration = match fit.regime {
        Regime::Classical => {
            let cl = |x: &R| <PhasePoly as BracketRing>::from_terms(x.to_terms());
            Some(regeneration_checks(fit, &sys.table, [&cl(&sys.a)?, &cl(&sys.b)?, &cl(&c)?, &cl(&sys.h)?])?)
        }
        Regime::Quantum => None,
    };
    Ok(CasimirResult { k: kk, reduction, regeneration })
}

/// Quantum quadratic Casimir with `+2ζ B` instead of `−2ζ B`.
///
/// That sign does not commute with `A` whenever `ζ ≠ 0`; kept so the
/// discrepancy can be measured. Returns `[K, A]`.
pub fn quadratic_casimir_plus_zeta_defect(
    fit: &TripleAlgebraFit,
    sys: &SystemDef<crate::weyl::DiffOperator>,
) -> crate::weyl::DiffOperator {
    let k_of = |n: &str| fit.element(n, &sys.h);
    let kk = casimir_formula(Family::Quadratic, Regime::Quantum, 1, &sys.a, &sys.b, &sys.c(), &k_of);
    kk.bracket(&sys.a)
}

/// Write a central element as `Σ k_i H^i`, `k_i` parameter-only.
pub fn reduce_in_h<R: BracketRing>(
    x: &R,
    sys: &SystemDef<R>,
    ext: &Arc<VarTable>,
) -> Result<PhasePoly, AlgebraError> {
    let order = fitting_order(&sys.table, &sys.a_dofs);
    let mut pows = alloc::vec![R::one_in(&sys.table)];
    for k in 1..=6usize {
        let next = pows[k - 1].times(&sys.h);
        pows.push(next);
    }
    let sol = triangular_solve(x, &pows, &order)?;
    if !sol.residual.is_zero() {
        return Err(AlgebraError::NotReducible { residual: format!("{}", sol.residual) });
    }
    let hi = ext.index(H_SYMBOL).expect("extended table");
    let mut out = PhasePoly::zero(ext);
    for (k, q) in sol.coeffs.iter().enumerate() {
        let c = real_param(q, ext, "Casimir coefficient")?;
        out = out.add_poly(&c.mul_poly(&PhasePoly::var_pow(ext, hi, k as i32)));
    }
    Ok(out)
}

/// Regeneration of the classical algebra from partial derivatives of `K(A, B, C)`.
fn regeneration_checks(
    fit: &TripleAlgebraFit,
    vt: &Arc<VarTable>,
    [a, b, c, h]: [&PhasePoly; 4],
) -> Result<[bool; 3], AlgebraError> {
    let params: Vec<&str> = fit.table.params().iter().map(|s| s.as_str()).collect();
    let mut all = params.clone();
    all.extend_from_slice(&["A", "B", "C"]);
    let abs = VarTable::new(&[], &[], &all).expect("fresh symbols");
    let av = PhasePoly::var(&abs, "A");
    let bv = PhasePoly::var(&abs, "B");
    let cv = PhasePoly::var(&abs, "C");
    let k_of = |n: &str| fit.get(n).retable(&abs).expect("same parameters");
    let kk = casimir_formula(fit.family, fit.regime, -1, &av, &bv, &cv, &k_of);
    let bind = Bindings::new(vt)
        .bind("A", a.clone())
        .bind("B", b.clone())
        .bind("C", c.clone())
        .bind(H_SYMBOL, h.clone());
    let half = |v: &str| -> Result<PhasePoly, AlgebraError> {
        let d = kk.diff(abs.index(v).expect("abstract symbol")).scale(&s(1, 2));
        substitute(&d, &bind)
    };
    let bc = b.bracket(c);
    let ca = c.bracket(a);
    Ok([half("C")? == *c, half("A")? == bc, half("B")? == ca])
}

/// Classical generating function `h` with the identity `K = C² − 2h` checked.
#[derive(Clone, Debug)]
pub struct GeneratingFunction {
    pub h: PhasePoly,
    pub identity_holds: bool,
}

/// Generating function of a classical system, compared against the Casimir element `k`.
pub fn build_generating_function(
    sys: &SystemDef<PhasePoly>,
    k: &PhasePoly,
) -> Result<GeneratingFunction, AlgebraError> {
    if sys.kind.regime != Regime::Classical {
        return Err(AlgebraError::UnsupportedRegime("generating functions are classical".into()));
    }
    let vt = &sys.table;
    let p = |src: &str| crate::parse::poly(vt, src);
    let h = &sys.h;
    let b = &sys.b;
    let h = match sys.kind.family {
        Family::Cubic => {
            let x = sys.a.sub_poly(&p("r"));
            let hr = h.sub_poly(&p("r"));
            let terms = [
                hr.mul_poly(&PhasePoly::sym_aab(&x, b)).scale(&s(16, 3)),
                PhasePoly::sym2(&x, b).mul_poly(&p("32*kappa*kappa1")),
                PhasePoly::sym_aaab(&x, b).scale(&s(-4, 1)),
                x.pow(4).mul_poly(&p("-64*kappa2")),
                x.pow(2).mul_poly(&p("512*kappa*kappa1*kappa2")),
                b.pow(2).mul_poly(&p("-16*kappa")),
                hr.mul_poly(b).mul_poly(&p("-64*kappa*kappa1")),
                p("-512*kappa*kappa1*kappa2*r^2 + 64*kappa2*r^4"),
            ];
            terms.iter().fold(PhasePoly::zero(vt), |acc, t| acc.add_poly(t))
        }
        Family::Quadratic => {
            let x = sys.a.sub_poly(&p("s"));
            let hs = h.sub_poly(&p("s"));
            let terms = [
                PhasePoly::sym_aab(&x, b).scale(&s(-8, 3)),
                hs.mul_poly(&PhasePoly::sym2(&x, b)).scale(&s(4, 1)),
                b.pow(2).mul_poly(&p("-4*lambda")),
                x.pow(2).mul_poly(&p("-16*(lambda1 + lambda2)")),
                hs.mul_poly(&x).mul_poly(&p("32*lambda2")),
                hs.mul_poly(&p("32*lambda2*s")),
                p("16*(lambda1 + lambda2)*s^2"),
            ];
            terms.iter().fold(PhasePoly::zero(vt), |acc, t| acc.add_poly(t))
        }
    };
    let c = sys.c();
    let rhs = c.mul_poly(&c).sub_poly(&h.scale(&s(2, 1)));
    Ok(GeneratingFunction { identity_holds: rhs == *k, h })
}

/// Classical limit of quantum constants: the ħ² coefficient of each quantum
/// constant must equal minus the classical constant and no ħ⁰ part may remain.
pub fn classical_limit_matches(quantum: &TripleAlgebraFit, classical: &TripleAlgebraFit) -> BTreeMap<String, bool> {
    let mut out = BTreeMap::new();
    let hb = quantum.table.index(crate::weyl::HBAR).expect("quantum table");
    for (name, qc) in &quantum.constants {
        let parts = qc.collect_in(hb);
        let zero = PhasePoly::zero(&quantum.table);
        let h0 = parts.get(&0).unwrap_or(&zero);
        let h2 = parts.get(&2).unwrap_or(&zero);
        let cl = classical.get(name).retable(&quantum.table).expect("shared symbols");
        out.insert(name.clone(), h0.is_zero() && h2.add_poly(&cl).is_zero());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::systems::*;

    fn casimir_matches<R: BracketRing>(sys: &SystemDef<R>) -> CasimirResult<R> {
        let f = fit_ternary(sys).unwrap();
        let k = build_casimir(&f, sys).unwrap();
        let want = reference::parse(&f.table, reference::casimir(sys.kind));
        assert_eq!(k.reduction, want, "{}", sys.kind);
        k
    }

    #[test]
    fn quantum_constants_match_closed_forms() {
        let q = quantum_q_system().unwrap();
        let fq = fit_ternary(&q).unwrap();
        let c = quantum_c_system().unwrap();
        let fc = fit_ternary(&c).unwrap();
        for cmp in reference::compare_constants(&fq, q.kind).into_iter().chain(reference::compare_constants(&fc, c.kind)) {
            assert!(cmp.matches(), "{}: off by {}", cmp.name, cmp.difference());
        }
        assert!(fq.ties.iter().chain(&fc.ties).all(|t| t.holds));
    }

    #[test]
    fn classical_fits_and_limit() {
        let cc = classical_c_system().unwrap();
        let f = fit_ternary(&cc).unwrap();
        assert!(f.get("beta").is_zero());
        assert!(!f.get("a").is_zero());
        let fq = fit_ternary(&quantum_c_system().unwrap()).unwrap();
        assert!(classical_limit_matches(&fq, &f).values().all(|&b| b));
        let g = fit_ternary(&classical_q_system().unwrap()).unwrap();
        let gq = fit_ternary(&quantum_q_system().unwrap()).unwrap();
        assert!(classical_limit_matches(&gq, &g).values().all(|&b| b));
    }

    #[test]
    fn classical_casimirs_reduce_and_regenerate() {
        for sys in [classical_c_system().unwrap(), classical_q_system().unwrap()] {
            let k = casimir_matches(&sys);
            assert_eq!(k.regeneration, Some([true; 3]), "{}", sys.kind);
            let g = build_generating_function(&sys, &k.k).unwrap();
            assert!(g.identity_holds, "{}", sys.kind);
        }
    }

    #[test]
    fn quantum_casimirs_reduce() {
        let sys = quantum_c_system().unwrap();
        let k = casimir_matches(&sys);
        let ext = k.reduction.table().clone();
        let r = (ext.index("r").unwrap(), Scalar::zero());
        let want = reference::parse(&ext, "4*kappa^2*hbar^2*(8*kappa1 - 35*hbar^2)*(8*kappa1 - 3*hbar^2)*(8*kappa2 - 3*hbar^2)");
        assert_eq!(k.coefficient(0).eval_partial(&[r]), want);
        let q = quantum_q_system().unwrap();
        casimir_matches(&q);
        let f = fit_ternary(&q).unwrap();
        assert!(!quadratic_casimir_plus_zeta_defect(&f, &q).is_zero());
    }

    #[test]
    fn generating_function_without_shift_or_quartic_coupling_has_no_constant() {
        let sys = classical_c_system().unwrap();
        let k = build_casimir(&fit_ternary(&sys).unwrap(), &sys).unwrap();
        let g = build_generating_function(&sys, &k.k).unwrap();
        let vt = &sys.table;
        let z = |n: &str| (vt.index(n).unwrap(), crate::scalar::Scalar::zero());
        let h0 = g.h.eval_partial(&[z("kappa2"), z("r")]);
        let phase: Vec<usize> = (0..2 * vt.dim()).collect();
        assert!(h0.terms().all(|(m, _)| phase.iter().any(|&i| m.0[i] != 0)));
    }
}
