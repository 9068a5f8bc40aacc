//! Strang splitting for `H = T(p) + V(x)` with exact gradients.

use std::sync::Arc;

use hchain_core::systems::{chain_integral_set, ChainDef, SystemDef};
use hchain_core::{PhasePoly, VarTable};
use serde::Serialize;

use super::float::{FloatPoly, Params};
use super::NumericError;

/// Hamiltonian plus the quantities whose conservation is monitored.
#[derive(Clone, Debug)]
pub struct TrajectorySetup {
    pub name: String,
    pub table: Arc<VarTable>,
    pub hamiltonian: PhasePoly,
    pub integrals: Vec<(String, PhasePoly)>,
}

impl TrajectorySetup {
    pub fn system(sys: &SystemDef<PhasePoly>) -> Self {
        TrajectorySetup {
            name: sys.kind.to_string(),
            table: sys.table.clone(),
            hamiltonian: sys.h.clone(),
            integrals: vec![("H".into(), sys.h.clone()), ("A".into(), sys.a.clone()), ("B".into(), sys.b.clone())],
        }
    }

    pub fn chain(chain: &ChainDef) -> Self {
        let set = chain_integral_set(chain);
        TrajectorySetup {
            name: format!("chain ({})", chain.label),
            table: chain.table.clone(),
            hamiltonian: chain.hamiltonians.last().expect("nonempty chain").clone(),
            integrals: set.names.into_iter().zip(set.integrals).collect(),
        }
    }

    /// Same setup with one monitored quantity replaced.
    pub fn with_integral(mut self, name: &str, f: PhasePoly) -> Self {
        match self.integrals.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = f,
            None => self.integrals.push((name.to_string(), f)),
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Drift {
    pub name: String,
    pub initial: f64,
    /// `max_t |Q(t) − Q(0)| / |Q(0)|` (absolute when `Q(0) = 0`).
    pub relative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryCheck {
    pub system: String,
    pub state: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub steps: u64,
    pub drift: Vec<Drift>,
    /// Smallest `|x_i|` met along the trajectory.
    pub closest_approach: f64,
}

impl TrajectoryCheck {
    pub fn max_drift(&self) -> f64 {
        self.drift.iter().map(|d| d.relative).fold(0.0, f64::max)
    }

    pub fn drift_of(&self, name: &str) -> Option<f64> {
        self.drift.iter().find(|d| d.name == name).map(|d| d.relative)
    }
}

struct Split {
    velocity: Vec<FloatPoly>,
    force: Vec<FloatPoly>,
}

fn split(setup: &TrajectorySetup, params: &Params) -> Result<Split, NumericError> {
    let vt = &setup.table;
    let n = vt.dim();
    let moms: Vec<usize> = (0..n).map(|k| vt.momentum(k)).collect();
    let poss: Vec<usize> = (0..n).map(|k| vt.position(k)).collect();
    let mut kinetic = PhasePoly::zero(vt);
    let mut potential = PhasePoly::zero(vt);
    for (m, c) in setup.hamiltonian.terms() {
        let t = PhasePoly::monomial(vt, m.clone(), c.clone());
        let has_p = moms.iter().any(|&i| m.0[i] != 0);
        let has_x = poss.iter().any(|&i| m.0[i] != 0);
        match (has_p, has_x) {
            (true, true) => return Err(NumericError::NotSeparable(format!("{t}"))),
            (true, false) => kinetic = kinetic.add_poly(&t),
            _ => potential = potential.add_poly(&t),
        }
    }
    let velocity = moms.iter().map(|&i| FloatPoly::compile(&kinetic.diff(i), params)).collect::<Result<_, _>>()?;
    let force = poss
        .iter()
        .map(|&i| FloatPoly::compile(&potential.diff(i).neg_poly(), params))
        .collect::<Result<_, _>>()?;
    Ok(Split { velocity, force })
}

/// Integrate Hamilton's equations from `state = [x…, p…]` with step `h` up to `horizon`.
///
/// One step is a half kick, a full drift and a half kick; each sub-flow is exact.
pub fn integrate_and_check(
    setup: &TrajectorySetup,
    params: &Params,
    state: &[f64],
    h: f64,
    horizon: f64,
    floor: f64,
) -> Result<TrajectoryCheck, NumericError> {
    let n = setup.table.dim();
    if state.len() != 2 * n {
        return Err(NumericError::BadState(format!("expected {} coordinates, got {}", 2 * n, state.len())));
    }
    let sp = split(setup, params)?;
    let monitored: Vec<FloatPoly> =
        setup.integrals.iter().map(|(_, f)| FloatPoly::compile(f, params)).collect::<Result<_, _>>()?;
    let mut z = state.to_vec();
    let initial: Vec<f64> = monitored.iter().map(|f| f.eval(&z)).collect();
    let mut worst = vec![0.0f64; monitored.len()];
    let steps = (horizon / h).round() as u64;
    let mut closest = f64::INFINITY;
    let mut buf = vec![0.0; n];
    let kick = |z: &mut Vec<f64>, buf: &mut Vec<f64>, dt: f64| {
        for (k, f) in sp.force.iter().enumerate() {
            buf[k] = f.eval(z);
        }
        for k in 0..n {
            z[n + k] += dt * buf[k];
        }
    };
    for step in 0..steps {
        kick(&mut z, &mut buf, 0.5 * h);
        for (k, v) in sp.velocity.iter().enumerate() {
            buf[k] = v.eval(&z);
        }
        for k in 0..n {
            z[k] += h * buf[k];
        }
        let near = z[..n].iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        closest = closest.min(near);
        if near < floor {
            return Err(NumericError::Singularity { time: (step + 1) as f64 * h, coordinate: near, floor });
        }
        kick(&mut z, &mut buf, 0.5 * h);
        for (i, f) in monitored.iter().enumerate() {
            let d = (f.eval(&z) - initial[i]).abs();
            let scale = if initial[i] == 0.0 { 1.0 } else { initial[i].abs() };
            worst[i] = worst[i].max(d / scale);
        }
    }
    Ok(TrajectoryCheck {
        system: setup.name.clone(),
        state: state.to_vec(),
        step: h,
        horizon,
        steps,
        drift: setup
            .integrals
            .iter()
            .zip(initial.iter().zip(&worst))
            .map(|((name, _), (&q0, &w))| Drift { name: name.clone(), initial: q0, relative: w })
            .collect(),
        closest_approach: closest,
    })
}

/// Drift at `h` and `h/2`; the ratio is about 4 for a second-order scheme.
#[derive(Clone, Debug, Serialize)]
pub struct Convergence {
    pub coarse: TrajectoryCheck,
    pub fine: TrajectoryCheck,
    /// Per monitored quantity, coarse drift over fine drift.
    pub ratios: Vec<(String, f64)>,
}

pub fn convergence_study(
    setup: &TrajectorySetup,
    params: &Params,
    state: &[f64],
    h: f64,
    horizon: f64,
    floor: f64,
) -> Result<Convergence, NumericError> {
    let coarse = integrate_and_check(setup, params, state, h, horizon, floor)?;
    let fine = integrate_and_check(setup, params, state, h / 2.0, horizon, floor)?;
    let ratios = coarse
        .drift
        .iter()
        .zip(&fine.drift)
        .map(|(c, f)| (c.name.clone(), c.relative / f.relative))
        .collect();
    Ok(Convergence { coarse, fine, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hchain_core::systems::classical_q_system;

    #[test]
    fn isotropic_rotation_generator_is_conserved() {
        let sys = classical_q_system().unwrap();
        let j = hchain_core::parse::poly(&sys.table, "q1*pq2 - q2*pq1");
        let setup = TrajectorySetup::system(&sys).with_integral("J", j);
        let params = Params::from([
            ("lambda".into(), 0.5),
            ("lambda1".into(), 0.0),
            ("lambda2".into(), 0.0),
            ("s".into(), 0.0),
        ]);
        let c = integrate_and_check(&setup, &params, &[1.0, 0.5, 0.2, -0.3], 1e-3, 2.0, 1e-6).unwrap();
        assert!(c.drift_of("J").unwrap() < 1e-12);
    }

    #[test]
    fn singularity_is_reported() {
        let sys = classical_q_system().unwrap();
        let setup = TrajectorySetup::system(&sys);
        let params = Params::from([
            ("lambda".into(), 0.5),
            ("lambda1".into(), 0.0),
            ("lambda2".into(), 0.0),
            ("s".into(), 0.0),
        ]);
        let r = integrate_and_check(&setup, &params, &[0.05, 1.0, -1.0, 0.0], 1e-3, 1.0, 1e-2);
        assert!(matches!(r, Err(NumericError::Singularity { .. })));
    }
}
