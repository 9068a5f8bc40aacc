//! One-dimensional singular oscillator on the half-line.
//!
//! `H = −½ħ² d²/dx² + ½ω²x² + ħ²(ν² − ¼)/(2x²)` with Dirichlet ends at `ε` and `L`.
//! The analytic levels are `ħω(2n + 1 + ν)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stencil {
    /// Three-point Laplacian, second order in the spacing.
    ThreePoint,
    /// Numerov matrix form `−½ħ² B⁻¹A + V`, fourth order.
    Numerov,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    /// Total points including both Dirichlet ends.
    pub points: usize,
    pub eps: f64,
    pub length: f64,
    pub stencil: Stencil,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub enum Method {
    Analytic,
    Grid(GridSpec),
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialOracle {
    pub omega: f64,
    pub nu: f64,
    pub hbar: f64,
    pub method: Method,
    pub eigenvalues: Vec<f64>,
}

pub fn analytic_level(omega: f64, nu: f64, hbar: f64, n: usize) -> f64 {
    hbar * omega * (2.0 * n as f64 + 1.0 + nu)
}

impl RadialOracle {
    pub fn analytic(omega: f64, nu: f64, hbar: f64, count: usize) -> Self {
        RadialOracle {
            omega,
            nu,
            hbar,
            method: Method::Analytic,
            eigenvalues: (0..count).map(|n| analytic_level(omega, nu, hbar, n)).collect(),
        }
    }

    pub fn grid(omega: f64, nu: f64, hbar: f64, spec: GridSpec, count: usize) -> Result<Self, NumericError> {
        if spec.points < count + 2 || spec.length <= spec.eps || spec.eps < 0.0 {
            return Err(NumericError::BadGrid(format!("{spec:?}")));
        }
        let m = spec.points - 2;
        let h = (spec.length - spec.eps) / (spec.points - 1) as f64;
        let x: Vec<f64> = (1..=m).map(|i| spec.eps + i as f64 * h).collect();
        let g = hbar * hbar * (nu * nu - 0.25);
        let v: Vec<f64> = x.iter().map(|&x| 0.5 * omega * omega * x * x + g / (2.0 * x * x)).collect();
        let kin = 0.5 * hbar * hbar / (h * h);
        let mut mat = DMatrix::<f64>::zeros(m, m);
        match spec.stencil {
            Stencil::ThreePoint => {
                for i in 0..m {
                    mat[(i, i)] = 2.0 * kin;
                    if i + 1 < m {
                        mat[(i, i + 1)] = -kin;
                        mat[(i + 1, i)] = -kin;
                    }
                }
            }
            Stencil::Numerov => {
                // A = tridiag(1, −2, 1), B = tridiag(1, 10, 1)/12; they commute, so B⁻¹A is symmetric
                let a = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
                    0 => -2.0,
                    1 => 1.0,
                    _ => 0.0,
                });
                let b = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
                    0 => 10.0 / 12.0,
                    1 => 1.0 / 12.0,
                    _ => 0.0,
                });
                let lap = b.lu().solve(&a).ok_or_else(|| NumericError::BadGrid("singular Numerov B".into()))?;
                mat = lap * (-kin);
                mat = (&mat + mat.transpose()) * 0.5;
            }
        }
        for i in 0..m {
            mat[(i, i)] += v[i];
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev.truncate(count);
        Ok(RadialOracle { omega, nu, hbar, method: Method::Grid(spec), eigenvalues: ev })
    }

    /// Largest relative deviation from the analytic ladder.
    pub fn max_relative_error(&self) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(n, e)| {
                let a = analytic_level(self.omega, self.nu, self.hbar, n);
                ((e - a) / a).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Domain for the lowest `count` levels: beyond the outermost turning point by
/// three oscillator lengths, Dirichlet at the origin.
pub fn default_domain(omega: f64, nu: f64, hbar: f64, count: usize) -> (f64, f64) {
    let ell = (hbar / omega).sqrt();
    let top = 2.0 * (count.max(1) - 1) as f64 + 1.0 + nu;
    (0.0, ((2.0 * top).sqrt() + 3.0) * ell)
}

/// Grid error against the analytic ladder, and convergence in the spacing.
#[derive(Clone, Debug, Serialize)]
pub struct GridStudy {
    pub omega: f64,
    pub nu: f64,
    pub hbar: f64,
    pub spec: GridSpec,
    pub levels: Vec<(f64, f64)>,
    pub max_relative_error: f64,
    /// Error on the stated grid over the error with half the spacing.
    pub refinement_ratio: f64,
    /// Change of the levels when the domain is enlarged by a quarter.
    pub domain_sensitivity: f64,
}

pub fn grid_study(omega: f64, nu: f64, hbar: f64, spec: GridSpec, count: usize) -> Result<GridStudy, NumericError> {
    let g = RadialOracle::grid(omega, nu, hbar, spec, count)?;
    let fine = RadialOracle::grid(omega, nu, hbar, GridSpec { points: 2 * spec.points - 1, ..spec }, count)?;
    let wide_len = spec.eps + 1.25 * (spec.length - spec.eps);
    let wide_pts = ((spec.points - 1) as f64 * 1.25).round() as usize + 1;
    let wide = RadialOracle::grid(omega, nu, hbar, GridSpec { points: wide_pts, length: wide_len, ..spec }, count)?;
    let sens = g
        .eigenvalues
        .iter()
        .zip(&wide.eigenvalues)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    Ok(GridStudy {
        omega,
        nu,
        hbar,
        spec,
        levels: g.eigenvalues.iter().enumerate().map(|(n, &e)| (analytic_level(omega, nu, hbar, n), e)).collect(),
        max_relative_error: g.max_relative_error(),
        refinement_ratio: g.max_relative_error() / fine.max_relative_error(),
        domain_sensitivity: sens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(omega: f64, nu: f64, stencil: Stencil) -> GridSpec {
        let (eps, length) = default_domain(omega, nu, 1.0, 3);
        GridSpec { points: 201, eps, length, stencil }
    }

    #[test]
    fn numerov_meets_tolerance() {
        for (w, nu) in [(1.0, 0.5), (2.0, 1.5), (4.0, 2.5)] {
            let g = RadialOracle::grid(w, nu, 1.0, spec(w, nu, Stencil::Numerov), 3).unwrap();
            assert!(g.max_relative_error() < 1e-4, "{w} {nu}: {}", g.max_relative_error());
        }
    }

    #[test]
    fn three_point_is_second_order() {
        let s = grid_study(1.0, 0.5, 1.0, spec(1.0, 0.5, Stencil::ThreePoint), 3).unwrap();
        assert!((3.5..4.5).contains(&s.refinement_ratio), "{}", s.refinement_ratio);
    }
}
