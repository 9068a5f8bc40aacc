//! Classical phase-space operations: Poisson bracket, substitution, division.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::linalg;
use crate::poly::{same_table, Monomial, PhasePoly, Poly, TermOrder};
use crate::scalar::{Coeff, Scalar};
use crate::vars::{VarKind, VarTable};

/// Canonical bracket `Σ_k ∂f/∂x_k ∂g/∂p_k − ∂f/∂p_k ∂g/∂x_k`.
pub fn poisson_bracket(f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly, AlgebraError> {
    if !same_table(f.table(), g.table()) {
        return Err(AlgebraError::TableMismatch);
    }
    let vt = f.table();
    let mut acc = PhasePoly::zero(vt);
    for k in 0..vt.dim() {
        let (x, p) = (vt.position(k), vt.momentum(k));
        let fx = f.diff(x);
        let gp = g.diff(p);
        if !fx.is_zero() && !gp.is_zero() {
            acc = acc.add_poly(&fx.mul_poly(&gp));
        }
        let fp = f.diff(p);
        let gx = g.diff(x);
        if !fp.is_zero() && !gx.is_zero() {
            acc = acc.sub_poly(&fp.mul_poly(&gx));
        }
    }
    Ok(acc)
}

/// Bracket for operands known to share a table.
pub fn pb(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    poisson_bracket(f, g).expect("operands share a symbol table")
}

/// Simultaneous substitution `symbol -> polynomial over target`.
///
/// Symbols of the source table without a binding are carried over by name and
/// must exist in `target`. A symbol occurring with a negative exponent may only
/// be bound to a single term with invertible coefficient.
#[derive(Clone, Debug)]
pub struct Bindings<C: Coeff> {
    pub target: Arc<VarTable>,
    pub map: BTreeMap<String, Poly<C>>,
}

impl<C: Coeff> Bindings<C> {
    pub fn new(target: &Arc<VarTable>) -> Self {
        Bindings { target: target.clone(), map: BTreeMap::new() }
    }

    pub fn bind(mut self, name: &str, value: Poly<C>) -> Self {
        assert!(same_table(value.table(), &self.target), "binding over the wrong table");
        self.map.insert(String::from(name), value);
        self
    }

    /// Bind `name` to the target symbol `to`.
    pub fn rename(self, name: &str, to: &str) -> Self {
        let v = Poly::var(&self.target.clone(), to);
        self.bind(name, v)
    }
}

pub fn substitute<C: Coeff>(f: &Poly<C>, b: &Bindings<C>) -> Result<Poly<C>, AlgebraError> {
    let src = f.table();
    let tgt = &b.target;
    let mut images: Vec<Poly<C>> = Vec::with_capacity(src.len());
    for name in src.names() {
        match b.map.get(name) {
            Some(p) => images.push(p.clone()),
            None => match tgt.index(name) {
                Some(j) => images.push(Poly::var_index(tgt, j)),
                None => {
                    // Only an error if the symbol is actually used.
                    images.push(Poly::zero(tgt));
                }
            },
        }
    }
    let mut cache: BTreeMap<(usize, i32), Poly<C>> = BTreeMap::new();
    let mut out = Poly::zero(tgt);
    for (m, c) in f.terms() {
        let mut t = Poly::constant(tgt, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = src.name(i);
            if !b.map.contains_key(name) && tgt.index(name).is_none() {
                return Err(AlgebraError::UnknownSymbol(name.into()));
            }
            let key = (i, e);
            if !cache.contains_key(&key) {
                let pw = power(&images[i], e).ok_or_else(|| {
                    AlgebraError::UnsupportedSubstitution(format!("{name}^{e} -> ({})^{e}", images[i]))
                })?;
                cache.insert(key, pw);
            }
            t = t.mul_poly(&cache[&key]);
        }
        out = out.add_poly(&t);
    }
    if !out.is_well_formed() {
        return Err(AlgebraError::UnsupportedSubstitution(format!("negative exponent on a polynomial symbol in {out}")));
    }
    Ok(out)
}

fn power<C: Coeff>(p: &Poly<C>, e: i32) -> Option<Poly<C>> {
    if e >= 0 {
        return Some(p.pow(e as u32));
    }
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let inv = c.inv()?;
    let vt = p.table();
    let neg = Monomial(m.0.iter().map(|x| -x).collect());
    Some(Poly::monomial(vt, neg, inv).pow((-e) as u32))
}

/// Default division order: momentum degree first, then graded-lex.
pub fn momentum_order(vt: &VarTable) -> TermOrder {
    TermOrder {
        weights: (0..vt.len()).map(|i| if vt.kind(i) == VarKind::Momentum { 1 } else { 0 }).collect(),
    }
}

/// Divisibility treating `x` and `1/x` as separate directions.
fn divides(lead: &Monomial, m: &Monomial) -> bool {
    lead.0.iter().zip(&m.0).all(|(&g, &e)| if g > 0 { e >= g } else if g < 0 { e <= g } else { true })
}

/// Multivariate division `f = Σ q_i basis_i + r` under `order`.
pub fn poly_div_in_order(
    f: &PhasePoly,
    basis: &[PhasePoly],
    order: &TermOrder,
) -> Result<(Vec<PhasePoly>, PhasePoly), AlgebraError> {
    for g in basis {
        if !same_table(f.table(), g.table()) {
            return Err(AlgebraError::TableMismatch);
        }
        assert!(!g.is_zero(), "zero divisor in basis");
    }
    let vt = f.table();
    let leads: Vec<(Monomial, Scalar)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(order).expect("nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let mut quots: Vec<PhasePoly> = basis.iter().map(|_| PhasePoly::zero(vt)).collect();
    let mut rem = PhasePoly::zero(vt);
    let mut p = f.clone();
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| divides(lm, &m)) {
            Some(i) => {
                let (lm, lc) = &leads[i];
                let qm = PhasePoly::monomial(vt, m.div(lm), &c / lc);
                p = p.sub_poly(&qm.mul_poly(&basis[i]));
                quots[i] = quots[i].add_poly(&qm);
            }
            None => {
                let t = PhasePoly::monomial(vt, m.clone(), c.clone());
                rem = rem.add_poly(&t);
                p = p.sub_poly(&t);
            }
        }
    }
    Ok((quots, rem))
}

/// [`poly_div_in_order`] under [`momentum_order`].
pub fn poly_div_in(f: &PhasePoly, basis: &[PhasePoly]) -> Result<(Vec<PhasePoly>, PhasePoly), AlgebraError> {
    poly_div_in_order(f, basis, &momentum_order(f.table()))
}

/// Phase-space (position and momentum) symbol indices.
pub fn phase_indices(vt: &VarTable) -> Vec<usize> {
    (0..2 * vt.dim()).collect()
}

/// Write `f = Σ_i c_i h^i` with every `c_i` free of phase-space symbols.
pub fn express_in(f: &PhasePoly, h: &PhasePoly) -> Result<Vec<PhasePoly>, AlgebraError> {
    let phase = phase_indices(f.table());
    let mut coeffs = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (q, r) = poly_div_in(&cur, core::slice::from_ref(h))?;
        if !r.free_of(&phase) {
            return Err(AlgebraError::NotReducible { residual: format!("{r}") });
        }
        coeffs.push(r);
        cur = q.into_iter().next().expect("one quotient");
    }
    Ok(coeffs)
}

/// Exact Jacobian of `fs` with respect to all positions and momenta at `point`.
pub fn jacobian_at(fs: &[PhasePoly], point: &[Scalar]) -> Vec<Vec<Scalar>> {
    let vars = phase_indices(fs[0].table());
    fs.iter().map(|f| vars.iter().map(|&v| f.diff(v).eval(point)).collect()).collect()
}

pub fn jacobian_rank(fs: &[PhasePoly], point: &[Scalar]) -> usize {
    linalg::rank(&jacobian_at(fs, point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::poly;

    fn vt() -> Arc<VarTable> {
        VarTable::new(&["x1", "x2"], &["p1", "p2"], &["k", "k1"]).unwrap()
    }

    #[test]
    fn canonical_pair() {
        let vt = vt();
        let b = pb(&poly(&vt, "x1"), &poly(&vt, "p1"));
        assert_eq!(b, poly(&vt, "1"));
        assert!(pb(&poly(&vt, "x1"), &poly(&vt, "k")).is_zero());
    }

    #[test]
    fn table_mismatch() {
        let a = vt();
        let b = VarTable::new(&["y"], &["py"], &[]).unwrap();
        assert_eq!(poisson_bracket(&poly(&a, "x1"), &poly(&b, "y")), Err(AlgebraError::TableMismatch));
    }

    #[test]
    fn substitution() {
        let vt = vt();
        let b = Bindings::new(&vt).rename("x1", "x2").bind("k", poly(&vt, "k1 + 1"));
        assert_eq!(substitute(&poly(&vt, "x1^2*k"), &b).unwrap(), poly(&vt, "x2^2*k1 + x2^2"));
        let bad = Bindings::new(&vt).bind("x1", poly(&vt, "x1 + x2"));
        assert!(matches!(substitute(&poly(&vt, "x1^-1"), &bad), Err(AlgebraError::UnsupportedSubstitution(_))));
        let ok = Bindings::new(&vt).bind("x1", poly(&vt, "2*x2"));
        assert_eq!(substitute(&poly(&vt, "x1^-2"), &ok).unwrap(), poly(&vt, "1/4*x2^-2"));
    }

    #[test]
    fn divide_square() {
        let vt = vt();
        let h = poly(&vt, "1/2*p1^2 + 1/2*p2^2 + k*x1^2 + k1*x2^-2");
        let (q, r) = poly_div_in(&h.pow(2), core::slice::from_ref(&h)).unwrap();
        assert_eq!(q[0], h);
        assert!(r.is_zero());
        let f = &(&h.pow(3).scale_int(2) - &h.scale_int(5)) + &poly(&vt, "k^2");
        let c = express_in(&f, &h).unwrap();
        assert_eq!(c, alloc::vec![poly(&vt, "k^2"), poly(&vt, "-5"), PhasePoly::zero(&vt), poly(&vt, "2")]);
        assert!(express_in(&poly(&vt, "x1"), &h).is_err());
    }

    #[test]
    fn jacobian_rank_of_separable() {
        let vt = vt();
        let h1 = poly(&vt, "p1^2 + x1^2");
        let h2 = poly(&vt, "p2^2 + x2^2");
        let pt: Vec<Scalar> = [1, 2, 3, 5, 1, 1].iter().map(|&v| Scalar::from_int(v)).collect();
        assert_eq!(jacobian_rank(&[h1.clone(), h2.clone(), &h1 + &h2], &pt), 2);
    }
}
