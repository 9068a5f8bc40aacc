//! Pointwise check of `[H, X] f = 0` by acting on test functions.
//!
//! `H(Xf) − X(Hf)` is formed by two applications of each operator, never through
//! the operator product, then evaluated in floats.

use hchain_core::systems::SystemDef;
use hchain_core::weyl::HBAR;
use hchain_core::{DiffOperator, Gaussian, PhasePoly, Poly};
use serde::Serialize;

use super::float::{compile_gaussian, Params};
use super::NumericError;

#[derive(Clone, Debug, Serialize)]
pub struct ActionResidual {
    pub integral: String,
    pub test_function: String,
    /// `max |H(Xf) − X(Hf)| / max(|H(Xf)|, |X(Hf)|)` over the sample points.
    pub relative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub system: String,
    pub points: Vec<Vec<f64>>,
    pub residuals: Vec<ActionResidual>,
}

impl ActionReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.relative).fold(0.0, f64::max)
    }
}

fn magnitude(re: f64, im: f64) -> f64 {
    re.hypot(im)
}

/// Residual of `[h, x]` on `f` at `points` (positions only).
pub fn commutator_residual(
    h: &DiffOperator,
    x: &DiffOperator,
    f: &PhasePoly,
    params: &Params,
    points: &[Vec<f64>],
) -> Result<f64, NumericError> {
    let fg: Poly<Gaussian> = f.to_gaussian();
    let hx = h.apply(&x.apply(&fg));
    let xh = x.apply(&h.apply(&fg));
    let diff = hx.sub_poly(&xh);
    let (dr, di) = compile_gaussian(&diff, params)?;
    let (ar, ai) = compile_gaussian(&hx, params)?;
    let (br, bi) = compile_gaussian(&xh, params)?;
    let n = f.table().dim();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for pt in points {
        let mut z = pt.clone();
        z.resize(2 * n, 0.0);
        num = num.max(magnitude(dr.eval(&z), di.eval(&z)));
        den = den.max(magnitude(ar.eval(&z), ai.eval(&z))).max(magnitude(br.eval(&z), bi.eval(&z)));
    }
    Ok(if den == 0.0 { num } else { num / den })
}

/// `[H, A] f` and `[H, B] f` for every test function.
pub fn quantum_action_check(
    sys: &SystemDef<DiffOperator>,
    tests: &[PhasePoly],
    params: &Params,
    points: &[Vec<f64>],
) -> Result<ActionReport, NumericError> {
    if !params.contains_key(HBAR) {
        return Err(NumericError::UnboundParameter(HBAR.into()));
    }
    let mut residuals = Vec::new();
    for f in tests {
        for (name, x) in [("A", &sys.a), ("B", &sys.b)] {
            residuals.push(ActionResidual {
                integral: name.into(),
                test_function: f.to_string(),
                relative: commutator_residual(&sys.h, x, f, params, points)?,
            });
        }
    }
    Ok(ActionReport { system: sys.kind.to_string(), points: points.to_vec(), residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hchain_core::parse::poly;
    use hchain_core::systems::quantum_q_system;

    #[test]
    fn q_system_commutes_on_polynomials() {
        let sys = quantum_q_system().unwrap();
        let f = poly(&sys.table, "q1^2*q2");
        let params = Params::from([
            ("lambda".into(), 0.5),
            ("lambda1".into(), 0.3),
            ("lambda2".into(), 0.7),
            ("s".into(), 0.1),
            ("hbar".into(), 1.0),
        ]);
        let pts = vec![vec![0.7, 1.3], vec![1.1, -0.4]];
        let r = quantum_action_check(&sys, &[f.clone()], &params, &pts).unwrap();
        assert!(r.max_residual() < 1e-12, "{r:?}");
        let bumped = sys.b.add(&DiffOperator::multiplication(&poly(&sys.table, "q1^2")));
        assert!(commutator_residual(&sys.h, &bumped, &f, &params, &pts).unwrap() > 1e-3);
    }
}
