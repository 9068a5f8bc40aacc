//! Sparse multivariate Laurent polynomials with exact coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Coeff, Gaussian, Scalar};
use crate::vars::VarTable;

/// Exponent vector indexed by [`VarTable`] position.
///
/// Ordered graded-lexicographically: total degree first, then the first
/// differing exponent (earlier symbols dominate).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when every exponent of `self` is at least the matching one of `other`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Weighted term order: compare the weighted degree, then fall back to graded-lex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub weights: Vec<i64>,
}

impl TermOrder {
    pub fn graded_lex(n: usize) -> Self {
        TermOrder { weights: vec![1; n] }
    }

    pub fn weighted_degree(&self, m: &Monomial) -> i64 {
        self.weights.iter().zip(&m.0).map(|(w, &e)| w * e as i64).sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.weighted_degree(a).cmp(&self.weighted_degree(b)).then_with(|| a.cmp(b))
    }
}

/// Sparse polynomial over a shared [`VarTable`]; zero coefficients are never stored.
#[derive(Clone)]
pub struct Poly<C> {
    vt: Arc<VarTable>,
    terms: BTreeMap<Monomial, C>,
}

/// Commutative phase-space polynomial with rational coefficients.
pub type PhasePoly = Poly<Scalar>;

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vt, &other.vt) && self.terms == other.terms
    }
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<C: Coeff> Poly<C> {
    pub fn zero(vt: &Arc<VarTable>) -> Self {
        Poly { vt: vt.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vt: &Arc<VarTable>, c: C) -> Self {
        Self::monomial(vt, Monomial::one(vt.len()), c)
    }

    pub fn one(vt: &Arc<VarTable>) -> Self {
        Self::constant(vt, C::one())
    }

    pub fn from_int(vt: &Arc<VarTable>, n: i64) -> Self {
        Self::constant(vt, C::from_scalar(Scalar::from_int(n)))
    }

    pub fn from_scalar(vt: &Arc<VarTable>, s: Scalar) -> Self {
        Self::constant(vt, C::from_scalar(s))
    }

    pub fn monomial(vt: &Arc<VarTable>, m: Monomial, c: C) -> Self {
        assert_eq!(m.0.len(), vt.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vt: vt.clone(), terms }
    }

    /// The symbol at index `i` raised to `e`.
    pub fn var_pow(vt: &Arc<VarTable>, i: usize, e: i32) -> Self {
        let mut m = Monomial::one(vt.len());
        m.0[i] = e;
        Self::monomial(vt, m, C::one())
    }

    pub fn var_index(vt: &Arc<VarTable>, i: usize) -> Self {
        Self::var_pow(vt, i, 1)
    }

    /// The named symbol; panics if absent (symbol names are static in this crate).
    pub fn var(vt: &Arc<VarTable>, name: &str) -> Self {
        let i = vt.index(name).unwrap_or_else(|| panic!("unknown symbol `{name}`"));
        Self::var_index(vt, i)
    }

    pub fn from_terms(vt: &Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vt);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.vt
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.vt.len()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Self) {
        assert!(same_table(&self.vt, &other.vt), "polynomials over different symbol tables");
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        self.check_table(other);
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn neg_poly(&self) -> Self {
        Poly { vt: self.vt.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.check_table(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), &c.neg());
        }
        r
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        self.check_table(other);
        let mut r = Self::zero(&self.vt);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vt);
        }
        Poly { vt: self.vt.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&C::from_scalar(Scalar::from_int(n)))
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        self.scale(&C::from_scalar(Scalar::ratio(n, d)))
    }

    /// Multiply by a single monomial.
    pub fn shift(&self, m: &Monomial) -> Self {
        Poly { vt: self.vt.clone(), terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vt);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_poly(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_poly(&base);
            }
        }
        result
    }

    /// Partial derivative with respect to the symbol at index `i` (Laurent-valid).
    pub fn diff(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.vt);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e != 0 {
                let mut nm = m.clone();
                nm.0[i] -= 1;
                r.add_term(nm, &c.mul(&C::from_scalar(Scalar::from_int(e as i64))));
            }
        }
        r
    }

    /// Largest exponent of symbol `i` (None for the zero polynomial).
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn min_degree_in(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    /// Total degree over the given symbol indices.
    pub fn degree_over(&self, idx: &[usize]) -> Option<i32> {
        self.terms.keys().map(|m| idx.iter().map(|&i| m.0[i]).sum()).max()
    }

    /// Split by the exponent of symbol `i`: `self = Σ_e out[e] · x_i^e`.
    pub fn collect_in(&self, i: usize) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut nm = m.clone();
            nm.0[i] = 0;
            out.entry(e).or_insert_with(|| Self::zero(&self.vt)).add_term(nm, c);
        }
        out
    }

    /// True when no term involves any symbol in `idx`.
    pub fn free_of(&self, idx: &[usize]) -> bool {
        self.terms.keys().all(|m| idx.iter().all(|&i| m.0[i] == 0))
    }

    pub fn involves(&self, i: usize) -> bool {
        !self.free_of(&[i])
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut r = Poly::<D>::zero(&self.vt);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), &f(c));
        }
        r
    }

    /// Same terms over another table whose symbol order extends or permutes this one.
    ///
    /// Returns `None` when a used symbol is missing from `target`.
    pub fn retable(&self, target: &Arc<VarTable>) -> Option<Self> {
        let map: Vec<Option<usize>> = self.vt.names().iter().map(|n| target.index(n)).collect();
        let mut r = Self::zero(target);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    nm.0[map[i]?] = e;
                }
            }
            r.add_term(nm, c);
        }
        Some(r)
    }

    /// Any exponent that is negative on a symbol that does not allow it.
    pub fn is_well_formed(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().enumerate().all(|(i, &e)| e >= 0 || self.vt.allows_negative(i)))
    }

    pub fn from_term_map(vt: &Arc<VarTable>, terms: BTreeMap<Monomial, C>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Poly { vt: vt.clone(), terms }
    }
}

impl Poly<Scalar> {
    /// Exact evaluation of the symbols in `values`, leaving the rest symbolic.
    pub fn eval_partial(&self, values: &[(usize, Scalar)]) -> Self {
        let mut r = Self::zero(&self.vt);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let mut nc = c.clone();
            for (i, v) in values {
                let e = nm.0[*i];
                if e != 0 {
                    nc = &nc * &v.pow(e);
                    nm.0[*i] = 0;
                }
            }
            r.add_term(nm, &nc);
        }
        r
    }

    /// Evaluate with every symbol bound; `point[i]` is the value of symbol `i`.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t = &t * &point[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Floating-point evaluation with every symbol bound.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    t *= powi(point[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn to_gaussian(&self) -> Poly<Gaussian> {
        self.map_coeffs(|c| Gaussian::real(c.clone()))
    }
}

fn powi(x: f64, e: i32) -> f64 {
    let mut r = 1.0;
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        1.0 / r
    } else {
        r
    }
}

impl Poly<Gaussian> {
    pub fn real_part(&self) -> Poly<Scalar> {
        self.map_coeffs(|c| c.re.clone())
    }

    pub fn imag_part(&self) -> Poly<Scalar> {
        self.map_coeffs(|c| c.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a, C: Coeff> $tr<&'a Poly<C>> for &'a Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: &'a Poly<C>) -> Poly<C> {
                self.$f(rhs)
            }
        }
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                self.$f(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_poly);
poly_binop!(Sub, sub, sub_poly);
poly_binop!(Mul, mul, mul_poly);

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_poly()
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_poly()
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    /// Human-readable form, highest graded-lex term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = monomial_string(&self.vt, m);
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `x^2*y^-1*k` style rendering of one monomial; empty for the unit monomial.
pub fn monomial_string(vt: &VarTable, m: &Monomial) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(vt.name(i));
        if e != 1 {
            let _ = write!(s, "^{e}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vt() -> Arc<VarTable> {
        VarTable::new(&["x", "y"], &["px", "py"], &["k"]).unwrap()
    }

    #[test]
    fn cancellation_removes_terms() {
        let vt = vt();
        let x = PhasePoly::var(&vt, "x");
        let y = PhasePoly::var(&vt, "y");
        let d = &(&x + &y) - &(&y + &x);
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn laurent_derivative() {
        let vt = vt();
        let xm2 = PhasePoly::var_pow(&vt, 0, -2);
        assert_eq!(xm2.diff(0), PhasePoly::var_pow(&vt, 0, -3).scale_int(-2));
    }

    #[test]
    fn binomial_square() {
        let vt = vt();
        let x = PhasePoly::var(&vt, "x");
        let y = PhasePoly::var(&vt, "y");
        let s = (&x + &y).pow(2);
        let expect = &(&x.pow(2) + &(&x * &y).scale_int(2)) + &y.pow(2);
        assert_eq!(s, expect);
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial(vec![1, 0, 0]);
        let b = Monomial(vec![0, 2, 0]);
        let c = Monomial(vec![0, 1, 0]);
        assert!(b > a);
        assert!(a > c);
    }

    #[test]
    fn collect_and_eval() {
        let vt = vt();
        let x = PhasePoly::var(&vt, "x");
        let k = PhasePoly::var(&vt, "k");
        let p = &(&x.pow(2) * &k) + &k.scale_int(3);
        let parts = p.collect_in(0);
        assert_eq!(parts[&0], k.scale_int(3));
        assert_eq!(parts[&2], k);
        let pt: Vec<Scalar> = [2, 0, 0, 0, 5].iter().map(|&v| Scalar::from_int(v)).collect();
        assert_eq!(p.eval(&pt), Scalar::from_int(35));
    }
}
