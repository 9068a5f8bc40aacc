//! Catalog of the two-dimensional building blocks and the Hamiltonian chains.
//!
//! The q-system is the isotropic oscillator with singular terms and quadratic
//! integrals; the c-system is the 1:2 anisotropic oscillator with a quartic
//! integral. Chains are built from them purely by substitution.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::AlgebraError;
use crate::parse::poly;
use crate::phase::{pb, substitute, Bindings};
use crate::poly::PhasePoly;
use crate::ring::BracketRing;
use crate::scalar::Scalar;
use crate::vars::VarTable;
use crate::weyl::{anticomm, mul, DiffOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Quadratic ternary algebra (q-system).
    Quadratic,
    /// Cubic ternary algebra (c-system).
    Cubic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    Classical,
    Quantum,
}

/// Selector accepted by the command line: `q-classical`, `c-quantum`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemKind {
    pub family: Family,
    pub regime: Regime,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] = [
        SystemKind { family: Family::Quadratic, regime: Regime::Classical },
        SystemKind { family: Family::Cubic, regime: Regime::Classical },
        SystemKind { family: Family::Quadratic, regime: Regime::Quantum },
        SystemKind { family: Family::Cubic, regime: Regime::Quantum },
    ];
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Quadratic => "q",
            Family::Cubic => "c",
        };
        let reg = match self.regime {
            Regime::Classical => "classical",
            Regime::Quantum => "quantum",
        };
        write!(f, "{fam}-{reg}")
    }
}

impl FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SystemKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown system `{s}` (expected q-classical, c-classical, q-quantum, c-quantum)"))
    }
}

/// A superintegrable system `(H, A, B)` with `{H,A} = {H,B} = 0` verified.
#[derive(Clone, Debug)]
pub struct SystemDef<R> {
    pub kind: SystemKind,
    pub table: Arc<VarTable>,
    pub h: R,
    pub a: R,
    pub b: R,
    /// Indices (degree-of-freedom numbers) of the momenta entering `A`.
    pub a_dofs: Vec<usize>,
    /// Name of the additive shift parameter (`r` or `s`).
    pub shift: &'static str,
}

impl<R: BracketRing> SystemDef<R> {
    fn verified(self) -> Result<Self, AlgebraError> {
        for (name, x) in [("A", &self.a), ("B", &self.b)] {
            let c = self.h.bracket(x);
            if !c.is_zero() {
                return Err(AlgebraError::IdentityFailure {
                    identity: format!("{{H,{name}}} = 0 for {}", self.kind),
                    residual: c.render(),
                });
            }
        }
        Ok(self)
    }

    /// `C = {A, B}` (or `[A, B]`).
    pub fn c(&self) -> R {
        self.a.bracket(&self.b)
    }
}

pub const C_POSITIONS: [&str; 2] = ["x1", "x2"];
pub const C_MOMENTA: [&str; 2] = ["px1", "px2"];
pub const C_PARAMS: [&str; 4] = ["kappa", "kappa1", "kappa2", "r"];
pub const Q_POSITIONS: [&str; 2] = ["q1", "q2"];
pub const Q_MOMENTA: [&str; 2] = ["pq1", "pq2"];
pub const Q_PARAMS: [&str; 4] = ["lambda", "lambda1", "lambda2", "s"];

pub fn table_for(kind: SystemKind) -> Arc<VarTable> {
    let (pos, mom, par) = match kind.family {
        Family::Cubic => (C_POSITIONS, C_MOMENTA, C_PARAMS),
        Family::Quadratic => (Q_POSITIONS, Q_MOMENTA, Q_PARAMS),
    };
    let mut params: Vec<&str> = par.to_vec();
    if kind.regime == Regime::Quantum {
        params.push("hbar");
    }
    VarTable::new(&pos, &mom, &params).expect("static table")
}

const C_HAMILTONIAN: &str = "1/2*px1^2 + 1/2*px2^2 + kappa*(x1^2 + 4*x2^2) + kappa1*x1^-2 + kappa2*x2^-2 + r";
const C_A: &str = "1/2*px1^2 + kappa*x1^2 + kappa1*x1^-2 + r";
const Q_HAMILTONIAN: &str = "1/2*pq1^2 + 1/2*pq2^2 + lambda*(q1^2 + q2^2) + lambda1*q1^-2 + lambda2*q2^-2 + s";
const Q_A: &str = "1/2*pq2^2 + lambda*q2^2 + lambda2*q2^-2 + s";

/// Classical c-system `(H₁, A₁, B₁)`.
pub fn classical_c_system() -> Result<SystemDef<PhasePoly>, AlgebraError> {
    let vt = table_for(SystemKind { family: Family::Cubic, regime: Regime::Classical });
    let j = poly(&vt, "x1*px2 - x2*px1");
    let b = &(&poly(&vt, "px1^2") * &j.pow(2))
        + &poly(
            &vt,
            "(2*kappa2*x1^2*x2^-2 + 4*kappa1*x2^2*x1^-2 - 4*kappa*x1^2*x2^2)*px1^2 \
             + (4*kappa*x1^3*x2 - 4*kappa1*x2*x1^-1)*px1*px2 \
             + 4*x2^2*(kappa*x1^4 - kappa1)^2*x1^-4",
        );
    SystemDef {
        kind: SystemKind { family: Family::Cubic, regime: Regime::Classical },
        h: poly(&vt, C_HAMILTONIAN),
        a: poly(&vt, C_A),
        b,
        table: vt,
        a_dofs: vec![0],
        shift: "r",
    }
    .verified()
}

/// Classical q-system `(H₂, A₂, B₂)`.
pub fn classical_q_system() -> Result<SystemDef<PhasePoly>, AlgebraError> {
    let vt = table_for(SystemKind { family: Family::Quadratic, regime: Regime::Classical });
    let j = poly(&vt, "q1*pq2 - q2*pq1");
    let b = &j.pow(2) + &poly(&vt, "2*lambda1*q2^2*q1^-2 + 2*lambda2*q1^2*q2^-2");
    SystemDef {
        kind: SystemKind { family: Family::Quadratic, regime: Regime::Classical },
        h: poly(&vt, Q_HAMILTONIAN),
        a: poly(&vt, Q_A),
        b,
        table: vt,
        a_dofs: vec![1],
        shift: "s",
    }
    .verified()
}

fn op(vt: &Arc<VarTable>, src: &str) -> DiffOperator {
    DiffOperator::quantize(&poly(vt, src))
}

/// Quantum q-system with `p = −iħ∂` and `J₃ = −iħ(q₁∂₂ − q₂∂₁)`.
pub fn quantum_q_system() -> Result<SystemDef<DiffOperator>, AlgebraError> {
    let vt = table_for(SystemKind { family: Family::Quadratic, regime: Regime::Quantum });
    let j = op(&vt, "q1*pq2 - q2*pq1");
    let b = mul(&j, &j).add(&op(&vt, "2*lambda1*q2^2*q1^-2 + 2*lambda2*q1^2*q2^-2"));
    SystemDef {
        kind: SystemKind { family: Family::Quadratic, regime: Regime::Quantum },
        h: op(&vt, Q_HAMILTONIAN),
        a: op(&vt, Q_A),
        b,
        table: vt,
        a_dofs: vec![1],
        shift: "s",
    }
    .verified()
}

/// Quantum c-system; `B₁` is assembled from its symmetrized pieces.
///
/// The rotation generator written `J₁` for this system is the same operator as
/// `J₃ = −iħ(x₁∂₂ − x₂∂₁)`.
pub fn quantum_c_system() -> Result<SystemDef<DiffOperator>, AlgebraError> {
    let vt = table_for(SystemKind { family: Family::Cubic, regime: Regime::Quantum });
    SystemDef {
        kind: SystemKind { family: Family::Cubic, regime: Regime::Quantum },
        h: op(&vt, C_HAMILTONIAN),
        a: op(&vt, C_A),
        b: quantum_c_integral(&vt),
        table: vt,
        a_dofs: vec![0],
        shift: "r",
    }
    .verified()
}

/// The quartic integral of the quantum c-system over `vt`.
///
/// Equals [`quantum_c_integral_printed`] plus `ħ²κ₂/(2x₂²)`: the printed
/// ħ² correction carries `2κ₂/x₂²` where commutation with `H` requires `3κ₂/x₂²`.
pub fn quantum_c_integral(vt: &Arc<VarTable>) -> DiffOperator {
    quantum_c_integral_printed(vt).add(&quantum_c_correction(vt))
}

/// `ħ²κ₂/(2x₂²)`, the difference between the conserved and the printed quartic integral.
pub fn quantum_c_correction(vt: &Arc<VarTable>) -> DiffOperator {
    DiffOperator::multiplication(&poly(vt, "1/2*hbar^2*kappa2*x2^-2"))
}

/// The quartic integral exactly as assembled from its published symmetrized pieces.
pub fn quantum_c_integral_printed(vt: &Arc<VarTable>) -> DiffOperator {
    let m = |s: &str| DiffOperator::multiplication(&poly(vt, s));
    let p1 = op(vt, "px1");
    let p1p2 = op(vt, "px1*px2");
    let p1sq = op(vt, "px1^2");
    let j = op(vt, "x1*px2 - x2*px1");
    let half_pj = anticomm(&p1, &j).scale_ratio(1, 2);
    let t1 = mul(&half_pj, &half_pj);
    let t2 = mul(&m("kappa2*x2^-2"), &anticomm(&m("x1^2"), &p1sq));
    let q = anticomm(&m("x1^3"), &p1p2)
        .scale_ratio(-1, 2)
        .add(&mul(&m("x2").scale_ratio(1, 2), &anticomm(&m("x1^2"), &p1sq)))
        .add(&m("kappa1*x2 - kappa*x2*x1^4"));
    let t3 = anticomm(&q, &m("4*x2*(kappa1 - kappa*x1^4)*x1^-4")).scale_ratio(1, 2);
    let t4 = m("hbar^2/2*(2*kappa2*x2^-2 - 4*kappa*x1^2 + 4*kappa1*(x1^2 + 8*x2^2)*x1^-4)");
    t1.add(&t2).add(&t3).add(&t4)
}

/// Chain labels `(1,1,2)`, `(1,2,2)`, `(1,2,4)`, `(1,2,4,8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainLabel {
    C112,
    C122,
    C124,
    C1248,
}

impl ChainLabel {
    pub const ALL: [ChainLabel; 4] = [ChainLabel::C112, ChainLabel::C122, ChainLabel::C124, ChainLabel::C1248];

    /// Frequency ratios `a_i` of the top Hamiltonian.
    pub fn ratios(self) -> &'static [i64] {
        match self {
            ChainLabel::C112 => &[1, 1, 2],
            ChainLabel::C122 => &[1, 2, 2],
            ChainLabel::C124 => &[1, 2, 4],
            ChainLabel::C1248 => &[1, 2, 4, 8],
        }
    }

    pub fn dim(self) -> usize {
        self.ratios().len()
    }
}

impl fmt::Display for ChainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.ratios().iter().map(|a| a.to_string()).collect();
        write!(f, "{}", r.join(","))
    }
}

impl FromStr for ChainLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        ChainLabel::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == t)
            .ok_or_else(|| format!("unknown chain `{s}` (expected 1,1,2 1,2,2 1,2,4 1,2,4,8)"))
    }
}

/// One two-dimensional subsystem embedded in a chain.
#[derive(Clone, Debug)]
pub struct ChainLink {
    pub family: Family,
    /// Substitution from the generic subsystem table to the chain table.
    pub bindings: Bindings<Scalar>,
    /// Images of the generic `(H, A, B)`.
    pub h: PhasePoly,
    pub a: PhasePoly,
    pub b: PhasePoly,
    /// Human-readable bindings, e.g. `kappa -> 4*k`.
    pub description: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct ChainDef {
    pub label: ChainLabel,
    pub table: Arc<VarTable>,
    pub hamiltonians: Vec<PhasePoly>,
    pub links: Vec<ChainLink>,
}

const CHAIN_POS: [&str; 4] = ["x", "y", "z", "u"];
const CHAIN_MOM: [&str; 4] = ["px", "py", "pz", "pu"];
const CHAIN_PAR: [&str; 5] = ["k", "k1", "k2", "k3", "k4"];

pub fn chain_table(dim: usize) -> Arc<VarTable> {
    VarTable::new(&CHAIN_POS[..dim], &CHAIN_MOM[..dim], &CHAIN_PAR[..=dim]).expect("static table")
}

/// `H_n` of a chain: `½Σp² + k Σ (a_i x_i)² + Σ k_i/x_i²` over the first `n` axes.
pub fn chain_hamiltonian(vt: &Arc<VarTable>, ratios: &[i64], n: usize) -> PhasePoly {
    let mut s = String::new();
    for i in 0..n {
        let a2 = ratios[i] * ratios[i];
        s.push_str(&format!(
            " + 1/2*{p}^2 + {a2}*k*{x}^2 + k{j}*{x}^-2",
            p = CHAIN_MOM[i],
            x = CHAIN_POS[i],
            j = i + 1
        ));
    }
    poly(vt, &s)
}

#[derive(Clone, Debug)]
pub struct LinkSpec {
    pub family: Family,
    /// (position 1, position 2) in the chain; momenta follow.
    pub axes: (usize, usize),
    /// Multiplier `c` in `κ = c·k` (or `λ = c·k`).
    pub scale: i64,
    /// Chain indices of the two singular couplings bound to `κ₁, κ₂` (`λ₁, λ₂`).
    pub couplings: (usize, usize),
    /// Index of the chain Hamiltonian bound to the shift, if any.
    pub shift: Option<usize>,
}

pub fn link_specs(label: ChainLabel) -> Vec<LinkSpec> {
    use Family::*;
    match label {
        ChainLabel::C112 => vec![
            LinkSpec { family: Quadratic, axes: (1, 0), scale: 1, couplings: (2, 1), shift: None },
            LinkSpec { family: Cubic, axes: (1, 2), scale: 1, couplings: (2, 3), shift: Some(0) },
        ],
        ChainLabel::C122 => vec![
            LinkSpec { family: Cubic, axes: (0, 1), scale: 1, couplings: (1, 2), shift: None },
            LinkSpec { family: Quadratic, axes: (2, 1), scale: 4, couplings: (3, 2), shift: Some(0) },
        ],
        ChainLabel::C124 => vec![
            LinkSpec { family: Cubic, axes: (0, 1), scale: 1, couplings: (1, 2), shift: None },
            LinkSpec { family: Cubic, axes: (1, 2), scale: 4, couplings: (2, 3), shift: Some(0) },
        ],
        ChainLabel::C1248 => vec![
            LinkSpec { family: Cubic, axes: (0, 1), scale: 1, couplings: (1, 2), shift: None },
            LinkSpec { family: Cubic, axes: (1, 2), scale: 4, couplings: (2, 3), shift: Some(0) },
            LinkSpec { family: Cubic, axes: (2, 3), scale: 16, couplings: (3, 4), shift: Some(1) },
        ],
    }
}

/// Build a chain, verifying every substitution image and all mutual brackets of the `H_i`.
pub fn build_chain(label: ChainLabel) -> Result<ChainDef, AlgebraError> {
    let n = label.dim();
    let vt = chain_table(n);
    let hs: Vec<PhasePoly> = (1..=n).map(|i| chain_hamiltonian(&vt, label.ratios(), i)).collect();
    let q = classical_q_system()?;
    let c = classical_c_system()?;
    let mut links = Vec::new();
    for (li, spec) in link_specs(label).into_iter().enumerate() {
        let generic = match spec.family {
            Family::Quadratic => &q,
            Family::Cubic => &c,
        };
        let (pos, mom, par) = match spec.family {
            Family::Quadratic => (Q_POSITIONS, Q_MOMENTA, Q_PARAMS),
            Family::Cubic => (C_POSITIONS, C_MOMENTA, C_PARAMS),
        };
        let mut b = Bindings::new(&vt);
        let mut desc = Vec::new();
        let axes = [spec.axes.0, spec.axes.1];
        for j in 0..2 {
            b = b.rename(pos[j], CHAIN_POS[axes[j]]).rename(mom[j], CHAIN_MOM[axes[j]]);
            desc.push((pos[j].to_string(), CHAIN_POS[axes[j]].to_string()));
        }
        let scale = poly(&vt, &format!("{}*k", spec.scale));
        desc.push((par[0].to_string(), format!("{scale}")));
        b = b.bind(par[0], scale);
        let cp = [spec.couplings.0, spec.couplings.1];
        for j in 0..2 {
            let name = CHAIN_PAR[cp[j]];
            b = b.rename(par[j + 1], name);
            desc.push((par[j + 1].to_string(), name.to_string()));
        }
        let shift = match spec.shift {
            Some(i) => {
                desc.push((par[3].to_string(), format!("H{}", i + 1)));
                hs[i].clone()
            }
            None => {
                desc.push((par[3].to_string(), "0".to_string()));
                PhasePoly::zero(&vt)
            }
        };
        b = b.bind(par[3], shift);
        let h = substitute(&generic.h, &b)?;
        let a = substitute(&generic.a, &b)?;
        let bb = substitute(&generic.b, &b)?;
        let top = &hs[li + 1];
        let below = &hs[li];
        if h != *top || a != *below {
            return Err(AlgebraError::IdentityFailure {
                identity: format!("link {} of chain ({label}) reproduces H{} and H{}", li + 1, li + 2, li + 1),
                residual: format!("{} ; {}", h.sub_poly(top), a.sub_poly(below)),
            });
        }
        links.push(ChainLink { family: spec.family, bindings: b, h, a, b: bb, description: desc });
    }
    for i in 0..n {
        for j in 0..i {
            let br = pb(&hs[i], &hs[j]);
            if !br.is_zero() {
                return Err(AlgebraError::IdentityFailure {
                    identity: format!("{{H{},H{}}} = 0", i + 1, j + 1),
                    residual: format!("{br}"),
                });
            }
        }
    }
    Ok(ChainDef { label, table: vt, hamiltonians: hs, links })
}

/// Integrals of a chain with the exact matrix of their mutual brackets.
#[derive(Clone, Debug)]
pub struct IntegralSet {
    pub names: Vec<String>,
    pub integrals: Vec<PhasePoly>,
    pub brackets: Vec<Vec<PhasePoly>>,
}

impl IntegralSet {
    pub fn bracket(&self, a: &str, b: &str) -> Option<&PhasePoly> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(&self.brackets[i][j])
    }
}

/// `H₁…H_n` followed by the link integrals `B₁, B₂, …` (numbered from the top link down).
pub fn chain_integral_set(chain: &ChainDef) -> IntegralSet {
    let mut names: Vec<String> = (1..=chain.hamiltonians.len()).map(|i| format!("H{i}")).collect();
    let mut integrals = chain.hamiltonians.clone();
    for (k, link) in chain.links.iter().rev().enumerate() {
        names.push(format!("B{}", k + 1));
        integrals.push(link.b.clone());
    }
    let brackets = integrals.iter().map(|f| integrals.iter().map(|g| pb(f, g)).collect()).collect();
    IntegralSet { names, integrals, brackets }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_round_trip() {
        for k in SystemKind::ALL {
            assert_eq!(k.to_string().parse::<SystemKind>().unwrap(), k);
        }
        for c in ChainLabel::ALL {
            assert_eq!(c.to_string().parse::<ChainLabel>().unwrap(), c);
        }
        assert_eq!("(1, 2, 4, 8)".parse::<ChainLabel>().unwrap(), ChainLabel::C1248);
        assert!("bogus".parse::<SystemKind>().is_err());
    }

    #[test]
    fn classical_systems_conserve() {
        classical_c_system().unwrap();
        classical_q_system().unwrap();
    }

    #[test]
    fn quantum_systems_conserve_and_reduce_classically() {
        let qc = quantum_c_system().unwrap();
        let cc = classical_c_system().unwrap();
        let lim = qc.b.classical_limit().unwrap();
        let vt = cc.table.clone();
        assert_eq!(lim.retable(&vt).unwrap(), cc.b);
        assert_eq!(qc.b.adjoint(), qc.b);
        let qq = quantum_q_system().unwrap();
        assert!(!qq.c().is_zero());
        let printed = quantum_c_integral_printed(&qc.table);
        let resid = qc.h.bracket(&printed);
        let expect = qc.h.bracket(&quantum_c_correction(&qc.table)).neg();
        assert_eq!(resid, expect);
    }

    #[test]
    fn chain_112_structure() {
        let ch = build_chain(ChainLabel::C112).unwrap();
        let set = chain_integral_set(&ch);
        assert_eq!(set.names.len(), 5);
        assert!(set.bracket("H3", "B1").unwrap().is_zero());
        assert!(set.bracket("H3", "B2").unwrap().is_zero());
        assert!(!set.bracket("B1", "B2").unwrap().is_zero());
    }
}
