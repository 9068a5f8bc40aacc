//! Floating-point evaluation of exact polynomials at bound parameter values.

use std::collections::BTreeMap;

use hchain_core::{Gaussian, PhasePoly, Poly, VarKind, VarTable};

use super::NumericError;

/// Parameter values by symbol name.
pub type Params = BTreeMap<String, f64>;

/// A phase polynomial with every parameter replaced by a float.
///
/// Evaluation points are laid out as `[x₁ … x_n, p₁ … p_n]`.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl FloatPoly {
    pub fn compile(p: &PhasePoly, params: &Params) -> Result<Self, NumericError> {
        let vt = p.table();
        let slots = slots(vt);
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut coef = c.to_f64();
            let mut powers = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match slots[i] {
                    Some(s) => powers.push((s, e)),
                    None => {
                        let name = vt.name(i);
                        let v = params.get(name).ok_or_else(|| NumericError::UnboundParameter(name.to_string()))?;
                        coef *= v.powi(e);
                    }
                }
            }
            if coef != 0.0 {
                terms.push((coef, powers));
            }
        }
        Ok(FloatPoly { terms })
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, pw)| pw.iter().fold(*c, |acc, &(s, e)| acc * z[s].powi(e)))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Real and imaginary parts of a Gaussian-coefficient polynomial.
pub fn compile_gaussian(p: &Poly<Gaussian>, params: &Params) -> Result<(FloatPoly, FloatPoly), NumericError> {
    Ok((FloatPoly::compile(&p.real_part(), params)?, FloatPoly::compile(&p.imag_part(), params)?))
}

// positions then momenta already occupy the first 2n table slots
fn slots(vt: &VarTable) -> Vec<Option<usize>> {
    (0..vt.len()).map(|i| (vt.kind(i) != VarKind::Param).then_some(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hchain_core::parse::poly;

    #[test]
    fn evaluates_laurent_terms() {
        let vt = VarTable::new(&["x"], &["p"], &["k"]).unwrap();
        let f = poly(&vt, "1/2*p^2 + k*x^2 + 3*x^-2");
        let params = Params::from([("k".to_string(), 2.0)]);
        let c = FloatPoly::compile(&f, &params).unwrap();
        assert!((c.eval(&[0.5, 2.0]) - (2.0 + 0.5 + 12.0)).abs() < 1e-12);
        assert!(matches!(FloatPoly::compile(&f, &Params::new()), Err(NumericError::UnboundParameter(_))));
    }
}
