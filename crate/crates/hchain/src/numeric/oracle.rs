//! Separable-sum oracle for chain spectra.
//!
//! A chain Hamiltonian over `n` axes is `Σ_i [½p_i² + ½(a_i μ)² x_i² + ħ²(μ_i² − ¼)/(2x_i²)]`,
//! and each axis contributes `ħ a_i μ (2n_i + 1 + μ_i)`. Energies here are in
//! units of `ħμ`, so the oracle is exact.

use std::collections::BTreeMap;

use hchain_core::spectrum::SpectrumTable;
use hchain_core::systems::ChainLabel;
use hchain_core::Scalar;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct SeparableOracle {
    pub ratios: Vec<i64>,
    pub mu: Vec<Scalar>,
}

impl SeparableOracle {
    pub fn new(chain: ChainLabel, mu: &[Scalar]) -> Self {
        SeparableOracle { ratios: chain.ratios().to_vec(), mu: mu.to_vec() }
    }

    /// `a_i (2n + 1 + μ_i)` for axis `i` (0-based).
    pub fn axis_level(&self, i: usize, n: u64) -> Scalar {
        let a = Scalar::from_int(self.ratios[i]);
        &a * &(&Scalar::from_int(2 * n as i64 + 1) + &self.mu[i])
    }

    /// Levels of `H_dims` not above `cap`, with multiplicities.
    pub fn spectrum(&self, dims: usize, cap: &Scalar) -> Vec<(Scalar, usize)> {
        let mut out: BTreeMap<Scalar, usize> = BTreeMap::new();
        self.fill(0, dims, Scalar::zero(), cap, &mut out);
        out.into_iter().collect()
    }

    fn fill(&self, i: usize, dims: usize, acc: Scalar, cap: &Scalar, out: &mut BTreeMap<Scalar, usize>) {
        if i == dims {
            *out.entry(acc).or_default() += 1;
            return;
        }
        // remaining axes contribute at least their ground levels
        let floor: Scalar = (i + 1..dims).fold(Scalar::zero(), |s, j| &s + &self.axis_level(j, 0));
        let mut n = 0;
        loop {
            let e = &acc + &self.axis_level(i, n);
            if &(&e + &floor) > cap {
                break;
            }
            self.fill(i + 1, dims, e, cap, out);
            n += 1;
        }
    }

    /// Per-axis quantum numbers of a tuple of nested energies `H_1 … H_k`, if any.
    pub fn decompose(&self, energies: &[Scalar]) -> Option<Vec<u64>> {
        let mut prev = Scalar::zero();
        let mut out = Vec::new();
        for (i, e) in energies.iter().enumerate() {
            let d = e - &prev;
            let a = Scalar::from_int(self.ratios[i]);
            // d/a − 1 − μ_i = 2n
            let two_n = &(&(&d * &a.recip()) - &Scalar::one()) - &self.mu[i];
            let n = &two_n * &Scalar::ratio(1, 2);
            if !n.is_integer() || n.is_negative() {
                return None;
            }
            out.push(u64::try_from(n.numer()).ok()?);
            prev = e.clone();
        }
        Some(out)
    }

    /// Float spectrum `ħμ·E` of `H_dims` for the lowest `count` distinct levels.
    pub fn float_levels(&self, dims: usize, hbar: f64, mu: f64, count: usize) -> Vec<(f64, usize)> {
        let mut cap = (0..dims).fold(Scalar::zero(), |s, j| &s + &self.axis_level(j, 0));
        loop {
            let s = self.spectrum(dims, &cap);
            if s.len() >= count {
                return s.into_iter().take(count).map(|(e, m)| (hbar * mu * e.to_f64(), m)).collect();
            }
            cap = &cap + &Scalar::from_int(2);
        }
    }
}

/// Ladder table set against the separable spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub rows: usize,
    /// Top energies of ladder rows missing from the oracle spectrum.
    pub missing: Vec<String>,
    /// Rows whose nested energies are not a joint per-axis eigenvalue tuple.
    pub not_joint: Vec<Vec<i64>>,
    /// Rows sharing the same per-axis quantum numbers.
    pub duplicated: Vec<Vec<i64>>,
    /// Highest top energy up to which the table is complete.
    pub cutoff: String,
    /// Multiplicities below the cutoff agree with the separable count.
    pub exhaustive_below_cutoff: bool,
    pub per_row: Vec<bool>,
}

impl OracleComparison {
    pub fn contained(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn all_ok(&self) -> bool {
        self.contained() && self.not_joint.is_empty() && self.duplicated.is_empty()
    }
}

/// Containment, joint-eigenvalue and multiplicity comparison.
///
/// `cutoff` is the top energy below which the enumerated table is known to be
/// complete (the lowest top energy of an omitted tuple, exclusive).
pub fn compare_with_oracle(table: &SpectrumTable, cutoff: &Scalar) -> OracleComparison {
    let n = table.labels.len();
    let oracle = SeparableOracle::new(table.chain, &table.mu);
    let max_top = table.rows.iter().map(|r| r.energies[n - 1].clone()).max().unwrap_or_else(Scalar::zero);
    let spec: BTreeMap<Scalar, usize> = oracle.spectrum(n, &max_top).into_iter().collect();
    let mut missing = Vec::new();
    let mut not_joint = Vec::new();
    let mut seen: BTreeMap<Vec<u64>, Vec<i64>> = BTreeMap::new();
    let mut duplicated = Vec::new();
    let mut per_row = Vec::new();
    for r in &table.rows {
        let top = &r.energies[n - 1];
        let inside = spec.contains_key(top);
        if !inside {
            missing.push(top.to_string());
        }
        let joint = oracle.decompose(&r.energies);
        match &joint {
            Some(q) => {
                if seen.insert(q.clone(), r.labels.clone()).is_some() {
                    duplicated.push(r.labels.clone());
                }
            }
            None => not_joint.push(r.labels.clone()),
        }
        per_row.push(inside && joint.is_some());
    }
    let below: Vec<(Scalar, usize)> = spec.iter().filter(|(e, _)| *e < cutoff).map(|(e, m)| (e.clone(), *m)).collect();
    let ladder: Vec<(Scalar, usize)> =
        table.degeneracy.iter().filter(|(e, _)| e < cutoff).cloned().collect();
    OracleComparison {
        rows: table.rows.len(),
        missing,
        not_joint,
        duplicated,
        cutoff: cutoff.to_string(),
        exhaustive_below_cutoff: below == ladder,
        per_row,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(n: usize) -> Vec<Scalar> {
        vec![Scalar::ratio(1, 2); n]
    }

    #[test]
    fn ground_level_and_multiplicity() {
        let o = SeparableOracle::new(ChainLabel::C112, &half(3));
        let s = o.spectrum(3, &Scalar::from_int(9));
        // (1 + ½) + (1 + ½) + 2(1 + ½) = 6
        assert_eq!(s[0], (Scalar::from_int(6), 1));
        // one quantum on axis 1 or 2
        assert_eq!(s[1], (Scalar::from_int(8), 2));
    }

    #[test]
    fn decomposition_rejects_off_lattice() {
        let o = SeparableOracle::new(ChainLabel::C112, &half(3));
        let e = |x: i64| Scalar::ratio(x, 2);
        assert_eq!(o.decompose(&[e(3), e(6), e(12)]), Some(vec![0, 0, 0]));
        assert_eq!(o.decompose(&[e(3), e(8), e(12)]), None);
    }
}
