//! Common interface of the classical (Poisson) and quantum (commutator) rings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::phase::{pb, phase_indices};
use crate::poly::{Monomial, PhasePoly, Poly, TermOrder};
use crate::scalar::{Coeff, Gaussian};
use crate::vars::VarTable;
use crate::weyl::{self, DiffOperator};

/// Associative algebra over a central subring of parameter polynomials.
pub trait Assoc: Clone + core::fmt::Debug {
    fn table(&self) -> &Arc<VarTable>;
    fn zero_in(vt: &Arc<VarTable>) -> Self;
    fn one_in(vt: &Arc<VarTable>) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    /// Multiply by a parameter-only polynomial.
    fn scale_central(&self, c: &PhasePoly) -> Self;

    fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale_central(&PhasePoly::from_scalar(self.table(), crate::scalar::Scalar::ratio(n, d)))
    }

    fn pow(&self, e: u32) -> Self {
        let mut r = Self::one_in(self.table());
        for _ in 0..e {
            r = r.times(self);
        }
        r
    }

    /// `{A,B} = AB + BA`.
    fn sym2(a: &Self, b: &Self) -> Self {
        a.times(b).plus(&b.times(a))
    }

    /// `{A,A,B} = A²B + ABA + BA²`.
    fn sym_aab(a: &Self, b: &Self) -> Self {
        let a2 = a.times(a);
        a2.times(b).plus(&a.times(b).times(a)).plus(&b.times(&a2))
    }

    /// `{A,B,B} = AB² + BAB + B²A`.
    fn sym_abb(a: &Self, b: &Self) -> Self {
        let b2 = b.times(b);
        a.times(&b2).plus(&b.times(a).times(b)).plus(&b2.times(a))
    }

    /// `{A,A,A,B} = A³B + A²BA + ABA² + BA³`.
    fn sym_aaab(a: &Self, b: &Self) -> Self {
        let a2 = a.times(a);
        let a3 = a2.times(a);
        a3.times(b).plus(&a2.times(b).times(a)).plus(&a.times(b).times(&a2)).plus(&b.times(&a3))
    }
}

/// [`Assoc`] with a Lie bracket and a term-map view.
pub trait BracketRing: Assoc + PartialEq {
    /// `{f, g}` classically, `[f, g]` quantum.
    fn bracket(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// Term map with Gaussian coefficients (momentum slots are ∂ orders for operators).
    fn to_terms(&self) -> Poly<Gaussian>;
    fn from_terms(p: Poly<Gaussian>) -> Result<Self, AlgebraError>;
    fn render(&self) -> String {
        format!("{:?}", self.to_terms())
    }
}

impl Assoc for PhasePoly {
    fn table(&self) -> &Arc<VarTable> {
        Poly::table(self)
    }
    fn zero_in(vt: &Arc<VarTable>) -> Self {
        PhasePoly::zero(vt)
    }
    fn one_in(vt: &Arc<VarTable>) -> Self {
        PhasePoly::one(vt)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add_poly(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub_poly(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_poly(o)
    }
    fn scale_central(&self, c: &PhasePoly) -> Self {
        self.mul_poly(c)
    }
    fn pow(&self, e: u32) -> Self {
        Poly::pow(self, e)
    }
}

impl BracketRing for PhasePoly {
    fn bracket(&self, o: &Self) -> Self {
        pb(self, o)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn to_terms(&self) -> Poly<Gaussian> {
        self.to_gaussian()
    }
    fn from_terms(p: Poly<Gaussian>) -> Result<Self, AlgebraError> {
        if !p.is_real() {
            return Err(AlgebraError::IdentityFailure {
                identity: "real classical quantity".into(),
                residual: format!("{}", p.imag_part()),
            });
        }
        Ok(p.real_part())
    }
}

impl Assoc for DiffOperator {
    fn table(&self) -> &Arc<VarTable> {
        DiffOperator::table(self)
    }
    fn zero_in(vt: &Arc<VarTable>) -> Self {
        DiffOperator::zero(vt)
    }
    fn one_in(vt: &Arc<VarTable>) -> Self {
        DiffOperator::one(vt)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        weyl::mul(self, o)
    }
    fn scale_central(&self, c: &PhasePoly) -> Self {
        DiffOperator::scale_central(self, c)
    }
}

impl BracketRing for DiffOperator {
    fn bracket(&self, o: &Self) -> Self {
        weyl::comm(self, o)
    }
    fn is_zero(&self) -> bool {
        DiffOperator::is_zero(self)
    }
    fn to_terms(&self) -> Poly<Gaussian> {
        self.as_poly().clone()
    }
    fn from_terms(p: Poly<Gaussian>) -> Result<Self, AlgebraError> {
        Ok(DiffOperator::from_normal_poly(p))
    }
}

/// Split a term map into phase monomials with parameter-polynomial coefficients.
pub fn split_phase(p: &Poly<Gaussian>) -> BTreeMap<Monomial, Poly<Gaussian>> {
    let vt = p.table();
    let nph = 2 * vt.dim();
    let mut out: BTreeMap<Monomial, Poly<Gaussian>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut ph = Monomial::one(vt.len());
        let mut pa = m.clone();
        for i in 0..nph {
            ph.0[i] = m.0[i];
            pa.0[i] = 0;
        }
        out.entry(ph).or_insert_with(|| Poly::zero(vt)).add_term(pa, c);
    }
    out
}

/// Leading phase monomial (under `order`) with its parameter coefficient.
pub fn leading_phase(p: &Poly<Gaussian>, order: &TermOrder) -> Option<(Monomial, Poly<Gaussian>)> {
    split_phase(p).into_iter().max_by(|a, b| order.cmp(&a.0, &b.0))
}

/// Exact quotient `num / den` for a single-term `den`; `None` if not exact.
pub fn div_by_term(num: &Poly<Gaussian>, den: &Poly<Gaussian>) -> Option<Poly<Gaussian>> {
    if den.len() != 1 {
        return None;
    }
    let (m, c) = den.terms().next()?;
    let inv = c.inv()?;
    let neg = Monomial(m.0.iter().map(|e| -e).collect());
    let q = num.shift(&neg).scale(&inv);
    if q.is_well_formed() {
        Some(q)
    } else {
        None
    }
}

/// Result of [`triangular_solve`]: coefficient per element and what could not be matched.
pub struct TriangularSolution {
    pub coeffs: Vec<Poly<Gaussian>>,
    pub residual: Poly<Gaussian>,
}

/// Write `target = Σ c_e · elems[e] + residual` with parameter-only `c_e`.
///
/// The elements must have pairwise distinct leading phase monomials under
/// `order` and monomial leading coefficients; the expansion is then unique and
/// the greedy reduction finds it whenever it exists.
pub fn triangular_solve<R: BracketRing>(
    target: &R,
    elems: &[R],
    order: &TermOrder,
) -> Result<TriangularSolution, AlgebraError> {
    let vt = target.table().clone();
    let leads: Vec<(Monomial, Poly<Gaussian>)> = elems
        .iter()
        .map(|e| {
            leading_phase(&e.to_terms(), order)
                .ok_or_else(|| AlgebraError::Inconsistent("zero element in fitting basis".into()))
        })
        .collect::<Result<_, _>>()?;
    for i in 0..leads.len() {
        for j in 0..i {
            if leads[i].0 == leads[j].0 {
                return Err(AlgebraError::Inconsistent(format!(
                    "fitting basis elements {j} and {i} share a leading monomial"
                )));
            }
        }
    }
    let by_lead: BTreeMap<Monomial, usize> = leads.iter().enumerate().map(|(i, l)| (l.0.clone(), i)).collect();
    let elem_terms: Vec<Poly<Gaussian>> = elems.iter().map(|e| e.to_terms()).collect();
    let mut coeffs: Vec<Poly<Gaussian>> = elems.iter().map(|_| Poly::zero(&vt)).collect();
    let mut rest = target.to_terms();
    let phase = phase_indices(&vt);
    loop {
        let Some((lm, lc)) = leading_phase(&rest, order) else { break };
        let Some(&i) = by_lead.get(&lm) else { break };
        let Some(q) = div_by_term(&lc, &leads[i].1) else { break };
        debug_assert!(q.free_of(&phase));
        let prod = elem_terms[i].mul_poly(&q);
        rest = rest.sub_poly(&prod);
        coeffs[i] = coeffs[i].add_poly(&q);
    }
    Ok(TriangularSolution { coeffs, residual: rest })
}

/// Momentum weights making `light` momenta lighter than the others.
///
/// With `light` the momenta of the integral `A`, the leading monomials of
/// `H^k A^j B^l` are pairwise distinct for the systems in this crate.
pub fn fitting_order(vt: &VarTable, light: &[usize]) -> TermOrder {
    let weights = (0..vt.len())
        .map(|i| {
            if i >= vt.dim() && i < 2 * vt.dim() {
                if light.contains(&(i - vt.dim())) {
                    10
                } else {
                    11
                }
            } else {
                0
            }
        })
        .collect();
    TermOrder { weights }
}
