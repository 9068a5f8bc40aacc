//! Normal-ordered differential operators with Gaussian-rational coefficients.
//!
//! A [`DiffOperator`] reuses the [`Poly`] term map: the exponent in the slot of
//! momentum `k` is the order of `∂_k`, and every term is read as
//! `c · x^a · ∂^b` with all positions to the left. Parameters (including the
//! symbol `hbar`) are central.
//!
//! Quantization maps a classical monomial `x^a p^b` to `x^a (−i ħ ∂)^b`.
//! The classical limit uses `[F, G] = iħ{F, G} + O(ħ²)`, so
//! `{F, G} = lim_{ħ→0} (1/(iħ)) [F, G]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::AlgebraError;
use crate::poly::{same_table, Monomial, PhasePoly, Poly};
use crate::scalar::{Coeff, Gaussian, Scalar};
use crate::vars::VarTable;

/// Name of the Planck-constant parameter expected in operator tables.
pub const HBAR: &str = "hbar";

#[derive(Clone, PartialEq)]
pub struct DiffOperator {
    poly: Poly<Gaussian>,
}

fn binom(n: i64, k: i64) -> Scalar {
    let mut r = Scalar::one();
    for j in 0..k {
        r = &r * &Scalar::ratio(n - j, j + 1);
    }
    r
}

/// `m (m−1) ⋯ (m−j+1)`, valid for negative `m`.
fn falling(m: i64, j: i64) -> Scalar {
    let mut r = 1i64;
    let mut big = Scalar::one();
    for t in 0..j {
        match r.checked_mul(m - t) {
            Some(v) => r = v,
            None => {
                big = &big * &Scalar::from_int(r);
                r = m - t;
            }
        }
    }
    &big * &Scalar::from_int(r)
}

impl DiffOperator {
    pub fn zero(vt: &Arc<VarTable>) -> Self {
        DiffOperator { poly: Poly::zero(vt) }
    }

    pub fn one(vt: &Arc<VarTable>) -> Self {
        DiffOperator { poly: Poly::one(vt) }
    }

    /// Wrap a term map already in normal order.
    pub fn from_normal_poly(poly: Poly<Gaussian>) -> Self {
        DiffOperator { poly }
    }

    /// Multiplication operator by a function of positions and parameters.
    ///
    /// Panics if `f` contains momenta.
    pub fn multiplication(f: &PhasePoly) -> Self {
        let vt = f.table();
        let moms: Vec<usize> = (0..vt.dim()).map(|k| vt.momentum(k)).collect();
        assert!(f.free_of(&moms), "multiplication operator must not contain momenta");
        DiffOperator { poly: f.to_gaussian() }
    }

    /// `∂_k`.
    pub fn partial(vt: &Arc<VarTable>, k: usize) -> Self {
        DiffOperator { poly: Poly::var_index(vt, vt.momentum(k)) }
    }

    fn hbar_index(vt: &VarTable) -> usize {
        vt.index(HBAR).expect("operator table must contain `hbar`")
    }

    /// Standard-ordered quantization: `x^a p^b ↦ x^a (−iħ∂)^b`.
    pub fn quantize(f: &PhasePoly) -> Self {
        let vt = f.table();
        let h = Self::hbar_index(vt);
        let mut out = Poly::<Gaussian>::zero(vt);
        for (m, c) in f.terms() {
            let order: i32 = (0..vt.dim()).map(|k| m.0[vt.momentum(k)]).sum();
            let mut nm = m.clone();
            nm.0[h] += order;
            out.add_term(nm, &Coeff::mul(&Gaussian::real(c.clone()), &minus_i_pow(order)));
        }
        DiffOperator { poly: out }
    }

    /// `p_k = −iħ∂_k`.
    pub fn momentum(vt: &Arc<VarTable>, k: usize) -> Self {
        Self::quantize(&PhasePoly::var_index(vt, vt.momentum(k)))
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.poly.table()
    }

    pub fn as_poly(&self) -> &Poly<Gaussian> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        DiffOperator { poly: self.poly.add_poly(&o.poly) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DiffOperator { poly: self.poly.sub_poly(&o.poly) }
    }

    pub fn neg(&self) -> Self {
        DiffOperator { poly: self.poly.neg_poly() }
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        DiffOperator { poly: self.poly.scale(c) }
    }

    pub fn scale_ratio(&self, n: i64, d: i64) -> Self {
        DiffOperator { poly: self.poly.scale_ratio(n, d) }
    }

    /// Multiply by a central element (a polynomial in parameters only).
    pub fn scale_central(&self, c: &PhasePoly) -> Self {
        let vt = self.table();
        assert!(c.free_of(&crate::phase::phase_indices(vt)), "central factor must be parameter-only");
        DiffOperator { poly: self.poly.mul_poly(&c.to_gaussian()) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.table());
        for _ in 0..e {
            r = op_mul(&r, self).expect("same table");
        }
        r
    }

    /// Largest total derivative order.
    pub fn order(&self) -> i32 {
        let vt = self.table();
        let moms: Vec<usize> = (0..vt.dim()).map(|k| vt.momentum(k)).collect();
        self.poly.degree_over(&moms).unwrap_or(0)
    }

    /// Formal adjoint: `(c x^a ∂^b)† = conj(c) (−∂)^b x^a`, renormalized.
    pub fn adjoint(&self) -> Self {
        let vt = self.table();
        let mut acc = Self::zero(vt);
        for (m, c) in self.poly.terms() {
            let mut dpart = Monomial::one(vt.len());
            let mut xpart = m.clone();
            let mut ord = 0;
            for k in 0..vt.dim() {
                let pi = vt.momentum(k);
                dpart.0[pi] = m.0[pi];
                xpart.0[pi] = 0;
                ord += m.0[pi];
            }
            let sign = if ord % 2 == 0 { 1 } else { -1 };
            let d = DiffOperator { poly: Poly::monomial(vt, dpart, Gaussian::real(Scalar::from_int(sign))) };
            let x = DiffOperator { poly: Poly::monomial(vt, xpart, c.conj()) };
            acc = acc.add(&op_mul(&d, &x).expect("same table"));
        }
        acc
    }

    /// Apply to a function of positions and parameters.
    pub fn apply(&self, f: &Poly<Gaussian>) -> Poly<Gaussian> {
        let vt = self.table();
        let mut out = Poly::<Gaussian>::zero(vt);
        for (m, c) in self.poly.terms() {
            let mut g = f.clone();
            let mut mult = m.clone();
            for k in 0..vt.dim() {
                let pi = vt.momentum(k);
                for _ in 0..m.0[pi] {
                    g = g.diff(vt.position(k));
                }
                mult.0[pi] = 0;
            }
            out = out.add_poly(&g.shift(&mult).scale(c));
        }
        out
    }

    /// Principal symbol expansion by ħ power: `Σ_e ħ^e · s_e(x, p)`.
    ///
    /// Each `∂_k` is replaced by `(i/ħ) p_k`, so the map inverts [`Self::quantize`].
    pub fn symbol_by_hbar(&self) -> BTreeMap<i32, Poly<Gaussian>> {
        let vt = self.table();
        let h = Self::hbar_index(vt);
        let mut out: BTreeMap<i32, Poly<Gaussian>> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let order: i32 = (0..vt.dim()).map(|k| m.0[vt.momentum(k)]).sum();
            let e = m.0[h] - order;
            let mut nm = m.clone();
            nm.0[h] = 0;
            let coef = Coeff::mul(c, &i_pow(order));
            out.entry(e).or_insert_with(|| Poly::zero(vt)).add_term(nm, &coef);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// ħ→0 limit of the symbol; errors if negative ħ powers survive or the limit is not real.
    pub fn classical_limit(&self) -> Result<PhasePoly, AlgebraError> {
        let by = self.symbol_by_hbar();
        if let Some((&e, p)) = by.iter().next() {
            if e < 0 {
                return Err(AlgebraError::IdentityFailure {
                    identity: format!("finite classical limit (ħ^{e} term)"),
                    residual: format!("{p}"),
                });
            }
        }
        let lim = by.get(&0).cloned().unwrap_or_else(|| Poly::zero(self.table()));
        if !lim.is_real() {
            return Err(AlgebraError::IdentityFailure {
                identity: "real classical limit".into(),
                residual: format!("{}", lim.imag_part()),
            });
        }
        Ok(lim.real_part())
    }

    /// Real part and imaginary part as phase polynomials (momentum slots hold ∂ orders).
    pub fn parts(&self) -> (PhasePoly, PhasePoly) {
        (self.poly.real_part(), self.poly.imag_part())
    }

    /// Substitute central parameters (positions and derivatives untouched).
    pub fn substitute_params(&self, b: &crate::phase::Bindings<Gaussian>) -> Result<Self, AlgebraError> {
        let vt = self.table();
        for name in b.map.keys() {
            if let Some(i) = vt.index(name) {
                if i < 2 * vt.dim() {
                    return Err(AlgebraError::UnsupportedSubstitution(format!(
                        "operator substitution of phase symbol `{name}`"
                    )));
                }
            }
        }
        Ok(DiffOperator { poly: crate::phase::substitute(&self.poly, b)? })
    }
}

fn i_pow(n: i32) -> Gaussian {
    let one = Scalar::one();
    let z = Scalar::zero();
    match n.rem_euclid(4) {
        0 => Gaussian::new(one, z),
        1 => Gaussian::new(z, one),
        2 => Gaussian::new(-one, z),
        _ => Gaussian::new(z, -one),
    }
}

fn minus_i_pow(n: i32) -> Gaussian {
    i_pow(-n)
}

/// Normal-ordered product `f ∘ g` via `∂^k x^m = Σ_j C(k,j) m^(j↓) x^(m−j) ∂^(k−j)`.
pub fn op_mul(f: &DiffOperator, g: &DiffOperator) -> Result<DiffOperator, AlgebraError> {
    if !same_table(f.table(), g.table()) {
        return Err(AlgebraError::TableMismatch);
    }
    let vt = f.table();
    let n = vt.dim();
    let mut out: BTreeMap<Monomial, Gaussian> = BTreeMap::new();
    // Per dof: the list of (j, C(k,j)·m^(j↓)) for the pair (k = ∂-order in f, m = x-power in g).
    let mut choices: Vec<Vec<(i32, Scalar)>> = Vec::with_capacity(n);
    for (ma, ca) in f.poly.terms() {
        for (mb, cb) in g.poly.terms() {
            choices.clear();
            for k in 0..n {
                let d = ma.0[vt.momentum(k)] as i64;
                let m = mb.0[vt.position(k)] as i64;
                let mut opts = Vec::new();
                for j in 0..=d {
                    let ff = falling(m, j);
                    if ff.is_zero() {
                        break;
                    }
                    opts.push((j as i32, &binom(d, j) * &ff));
                }
                choices.push(opts);
            }
            let base = ma.mul(mb);
            let c0 = Coeff::mul(ca, cb);
            let mut idx = alloc::vec![0usize; n];
            loop {
                let mut mono = base.clone();
                let mut coef = Scalar::one();
                for k in 0..n {
                    let (j, ref s) = choices[k][idx[k]];
                    mono.0[vt.position(k)] -= j;
                    mono.0[vt.momentum(k)] -= j;
                    coef = &coef * s;
                }
                let t = Coeff::mul(&c0, &Gaussian::real(coef));
                match out.entry(mono) {
                    alloc::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(t);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut o) => o.get_mut().add_assign(&t),
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }
    Ok(DiffOperator { poly: Poly::from_term_map(vt, out) })
}

/// Product of a word of operators, normalized left to right.
pub fn normalize(word: &[DiffOperator]) -> DiffOperator {
    let mut it = word.iter();
    let first = it.next().expect("nonempty word").clone();
    it.fold(first, |acc, w| op_mul(&acc, w).expect("same table"))
}

pub fn commutator(f: &DiffOperator, g: &DiffOperator) -> Result<DiffOperator, AlgebraError> {
    Ok(op_mul(f, g)?.sub(&op_mul(g, f)?))
}

/// `[f, g]` for operands known to share a table.
pub fn comm(f: &DiffOperator, g: &DiffOperator) -> DiffOperator {
    commutator(f, g).expect("operands share a symbol table")
}

pub fn mul(f: &DiffOperator, g: &DiffOperator) -> DiffOperator {
    op_mul(f, g).expect("operands share a symbol table")
}

/// `{A, B} = AB + BA`.
pub fn anticomm(a: &DiffOperator, b: &DiffOperator) -> DiffOperator {
    mul(a, b).add(&mul(b, a))
}

/// Symmetrized products used by ternary algebras.
#[derive(Clone, Debug)]
pub enum SymmetrizedProduct {
    /// `{A,B} = AB + BA`.
    Two(DiffOperator, DiffOperator),
    /// `{A,A,B} = A²B + ABA + BA²`.
    Three(DiffOperator, DiffOperator),
    /// `{A,A,A,B} = A³B + A²BA + ABA² + BA³`.
    Four(DiffOperator, DiffOperator),
    /// `{A,B,B} = AB² + BAB + B²A`.
    ThreeRight(DiffOperator, DiffOperator),
}

impl SymmetrizedProduct {
    pub fn expand(&self) -> DiffOperator {
        match self {
            SymmetrizedProduct::Two(a, b) => anticomm(a, b),
            SymmetrizedProduct::Three(a, b) => {
                let a2 = mul(a, a);
                mul(&a2, b).add(&mul(&mul(a, b), a)).add(&mul(b, &a2))
            }
            SymmetrizedProduct::Four(a, b) => {
                let a2 = mul(a, a);
                let a3 = mul(&a2, a);
                mul(&a3, b)
                    .add(&mul(&mul(&a2, b), a))
                    .add(&mul(&mul(a, b), &a2))
                    .add(&mul(b, &a3))
            }
            SymmetrizedProduct::ThreeRight(a, b) => {
                let b2 = mul(b, b);
                mul(a, &b2).add(&mul(&mul(b, a), b)).add(&mul(&b2, a))
            }
        }
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Display for DiffOperator {
    /// Momentum symbols in the output stand for derivative orders.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::poly;

    fn vt() -> Arc<VarTable> {
        VarTable::new(&["x", "y"], &["px", "py"], &["hbar", "k"]).unwrap()
    }

    #[test]
    fn canonical_commutation() {
        let vt = vt();
        let x = DiffOperator::multiplication(&poly(&vt, "x"));
        let d = DiffOperator::partial(&vt, 0);
        let dx = mul(&d, &x);
        let expect = mul(&x, &d).add(&DiffOperator::one(&vt));
        assert_eq!(dx, expect);
        let p = DiffOperator::momentum(&vt, 0);
        let c = comm(&p, &x);
        let minus_i_hbar = DiffOperator::multiplication(&poly(&vt, "hbar")).scale(&Gaussian::new(
            Scalar::zero(),
            Scalar::from_int(-1),
        ));
        assert_eq!(c, minus_i_hbar);
    }

    #[test]
    fn laurent_product_acts_correctly() {
        let vt = vt();
        let a = mul(
            &mul(&DiffOperator::multiplication(&poly(&vt, "x^-2")), &DiffOperator::partial(&vt, 0).pow(2)),
            &DiffOperator::multiplication(&poly(&vt, "x")),
        );
        for f in ["x^3", "x^-1"] {
            let fx = poly(&vt, f).to_gaussian();
            let direct = poly(&vt, &alloc::format!("x*{f}")).diff(0).diff(0).to_gaussian().shift(&Monomial(alloc::vec![
                -2, 0, 0, 0, 0, 0
            ]));
            assert_eq!(a.apply(&fx), direct);
        }
    }

    #[test]
    fn quantize_round_trip() {
        let vt = vt();
        let f = poly(&vt, "x^2*px*py + k*y^-2 + px^2");
        let q = DiffOperator::quantize(&f);
        assert_eq!(q.classical_limit().unwrap(), f);
        assert_eq!(q.order(), 2);
    }

    #[test]
    fn momentum_squared_is_self_adjoint() {
        let vt = vt();
        let h = DiffOperator::quantize(&poly(&vt, "1/2*px^2 + k*x^2 + y^-2"));
        assert_eq!(h.adjoint(), h);
        let p = DiffOperator::momentum(&vt, 0);
        assert_eq!(p.adjoint(), p);
        let xp = DiffOperator::quantize(&poly(&vt, "x*px"));
        assert_ne!(xp.adjoint(), xp);
    }
}
