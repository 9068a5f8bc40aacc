//! Published closed forms for the four two-dimensional systems.
//!
//! Everything here is a literal transcription, kept as source text so that
//! reports can show both the expected form and what the fitter produced. The
//! code never uses these to compute anything; they are compared against.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fit::H_SYMBOL;
use crate::parse::parse_poly;
use crate::poly::PhasePoly;
use crate::systems::{Family, Regime, SystemKind};
use crate::vars::VarTable;

/// Expected structure constants `(name, expression in H and parameters)`.
pub fn structure_constants(kind: SystemKind) -> &'static [(&'static str, &'static str)] {
    match (kind.family, kind.regime) {
        (Family::Quadratic, Regime::Quantum) => &[
            ("alpha", "8*hbar^2"),
            ("beta", "0"),
            ("gamma", "0"),
            ("delta", "-8*hbar^2*(H - s) - 16*hbar^2*s"),
            ("epsilon", "8*hbar^2*lambda"),
            ("zeta", "8*hbar^2*(H - s)*s + 8*hbar^2*s^2 + 4*hbar^4*lambda"),
            ("a", "0"),
            ("d", "-32*hbar^2*(lambda1 + lambda2) + 16*hbar^4"),
            ("z", "8*(4*hbar^2*lambda2 - hbar^4)*(H - s) + 8*(4*hbar^2*(lambda1 + lambda2) - 2*hbar^4)*s"),
        ],
        (Family::Cubic, Regime::Quantum) => &[
            ("a", "16*hbar^2"),
            ("alpha", "-16*hbar^2*(H - r) - 48*hbar^2*r"),
            ("beta", "0"),
            ("gamma", "32*hbar^2*(H - r)*r - 64*hbar^2*kappa*kappa1 + 48*hbar^2*r^2 + 88*hbar^4*kappa"),
            ("delta", "32*hbar^2*kappa"),
            (
                "epsilon",
                "-8*(2*hbar^2*r^2 - 8*hbar^2*kappa*kappa1 + 3*hbar^4*kappa)*(H - r) - 16*hbar^2*r^3 \
                 + 64*hbar^2*kappa*kappa1*r - 88*hbar^4*kappa*r",
            ),
            ("mu", "-256*hbar^2*kappa2 + 352*hbar^4"),
            ("nu", "-352*hbar^4*(H - r) + 96*r*(8*hbar^2*kappa2 - 11*hbar^4)"),
            (
                "xi",
                "64*hbar^4*(H - r)^2 + 704*hbar^4*r*(H - r) - 96*(8*hbar^2*kappa2 - 11*hbar^4)*r^2 \
                 + 16*kappa*(64*hbar^2*kappa1*kappa2 - 8*hbar^4*(5*kappa1 + 11*kappa2) + 31*hbar^6)",
            ),
            (
                "zeta",
                "-64*hbar^4*(H - r)^2*r + 16*(24*hbar^4*kappa*kappa1 - 22*hbar^4*r^2 - 9*hbar^6*kappa)*(H - r) \
                 + 32*(8*hbar^2*kappa2 - 11*hbar^4)*r^3 \
                 - 16*kappa*(64*hbar^2*kappa1*kappa2 - 8*hbar^4*(5*kappa1 + 11*kappa2) + 31*hbar^6)*r",
            ),
        ],
        _ => &[],
    }
}

/// Expected Casimir as a polynomial in `H`.
pub fn casimir(kind: SystemKind) -> &'static str {
    match (kind.family, kind.regime) {
        (Family::Cubic, Regime::Classical) => "-128*kappa2*(r^2 - 4*kappa*kappa1)^2",
        (Family::Quadratic, Regime::Classical) => {
            "-32*lambda2*(H - s)^2 - 64*lambda2*s*(H - s) + 128*lambda*lambda1*lambda2 - 32*(lambda1 + lambda2)*s^2"
        }
        (Family::Quadratic, Regime::Quantum) => {
            "4*(8*hbar^2*lambda2 - 3*hbar^4)*(H - s)^2 \
             - 16*(8*hbar^2*lambda*lambda1*lambda2 - 3*hbar^4*lambda*(lambda1 + lambda2) + hbar^6*lambda) \
             + (64*hbar^2*lambda2 - 80*hbar^4)*(H - s)*s + (32*hbar^2*(lambda1 + lambda2) - 80*hbar^4)*s^2"
        }
        (Family::Cubic, Regime::Quantum) => {
            "-64/3*(11*hbar^4*r^2 - 8*hbar^4*kappa*kappa1 + 3*hbar^6*kappa)*(H - r)^2 \
             - 32/3*(70*hbar^4*r^3 - 136*hbar^4*kappa*kappa1*r + 211*hbar^6*kappa*r)*(H - r) \
             + 16*(8*hbar^2*kappa2 - 35*hbar^4)*r^4 \
             - 16*kappa*(64*hbar^2*kappa1*kappa2 - 8*hbar^4*(13*kappa1 + 43*kappa2) + 215*hbar^6)*r^2 \
             + 4*kappa^2*hbar^2*(8*kappa1 - 35*hbar^2)*(8*kappa1 - 3*hbar^2)*(8*kappa2 - 3*hbar^2)"
        }
    }
}

/// Parse a closed form over a table extended by `H`.
pub fn parse(ext: &Arc<VarTable>, src: &str) -> PhasePoly {
    debug_assert!(ext.index(H_SYMBOL).is_some());
    parse_poly(ext, src).expect("reference expression parses")
}

/// One comparison between a computed and an expected polynomial.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub name: String,
    pub expected: PhasePoly,
    pub computed: PhasePoly,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }

    pub fn difference(&self) -> PhasePoly {
        self.computed.sub_poly(&self.expected)
    }
}

/// Compare fitted constants against [`structure_constants`].
pub fn compare_constants(fit: &crate::fit::TripleAlgebraFit, kind: SystemKind) -> Vec<Comparison> {
    structure_constants(kind)
        .iter()
        .map(|(name, src)| Comparison {
            name: (*name).into(),
            expected: parse(&fit.table, src),
            computed: fit.get(name).clone(),
        })
        .collect()
}

/// Structure function of the generic cubic algebra with `β = 0`, over `y = N + u`,
/// with `√δ` written as `sq`.
pub const CUBIC_PHI: &str = "-6*sq^2*K + 6*a^2*sq^6*y^6 + (12*a*alpha*sq^5 - 18*a^2*sq^6)*y^5 \
    + 3*sq^4*(5*a^2*sq^2 + 2*alpha^2 - 10*alpha*a*sq + 4*a*gamma + sq^2*mu)*y^4 \
    + 2*sq^3*(-6*alpha^2*sq + 2*alpha*(5*a*sq^2 + 3*gamma) + 6*a*(epsilon - 2*gamma*sq) - 3*sq^3*mu + 2*sq^2*nu)*y^3 \
    + 3*sq^2*(-a^2*sq^4 + 2*alpha^2*sq^2 - 6*alpha*gamma*sq + 4*a*gamma*sq^2 - 6*a*sq*epsilon + 4*alpha*epsilon \
        + 2*gamma^2 - 2*sq^3*nu + sq^4*mu + 2*sq^2*xi)*y^2 \
    + 2*sq*(a*sq^2*(3*epsilon - alpha*sq^2) + 3*gamma*(alpha*sq^2 + 2*epsilon) - 6*alpha*sq*epsilon - 3*gamma^2*sq \
        - 3*sq^3*xi + sq^4*nu + 6*sq^2*zeta)*y \
    + 2*alpha*sq^2*epsilon - 6*gamma*sq*epsilon - 6*sq^3*zeta + 6*epsilon^2";

/// Structure function of the generic quadratic algebra with `β = γ = 0`,
/// `√ε` written as `sq` (negative powers allowed).
pub const QUADRATIC_PHI: &str = "1/4*(-K*sq^-2 - z*sq^-1 - delta*zeta*sq^-3 + zeta^2*sq^-4) \
    - 1/12*(3*d - a*sq - 3*alpha*delta*sq^-1 + 3*delta^2*sq^-2 - 6*z*sq^-1 + 6*alpha*zeta*sq^-2 - 6*delta*zeta*sq^-3)*y \
    + 1/4*(alpha^2 + d - a*sq - 3*alpha*delta*sq^-1 + delta^2*sq^-2 + 2*alpha*zeta*sq^-2)*y^2 \
    - 1/6*(3*alpha^2 - a*sq - 3*alpha*delta*sq^-1)*y^3 + 1/4*alpha^2*y^4";

/// Degree-14 structure function of the generic cubic algebra with `β ≠ 0`.
pub const CUBIC_BETA_PHI: &str = include_str!("data/cubic_beta_phi.txt");

/// Factored structure function of the quantum c-system as `(prefactor, factors)`,
/// in `y` (standing for `N + u`), `hbar`, `nu`, `nu1`, `nu2`, `r` and `H`.
pub const CSYSTEM_PHI: (&str, [&str; 6]) = (
    "3*2^9*hbar^4",
    [
        "hbar*nu*(4*y - 1 - nu1) - r",
        "hbar*nu*(4*y - 3 - nu1) - r",
        "hbar*nu*(4*y - 1 + nu1) - r",
        "hbar*nu*(4*y - 3 + nu1) - r",
        "2*hbar*nu*(2*y - 1 + nu2) - H",
        "2*hbar*nu*(2*y - 1 - nu2) - H",
    ],
);

/// Factored structure function of the quantum q-system, in `y`, `hbar`, `nu`,
/// `nu1`, `nu2`, `s` and `H`.
pub const QSYSTEM_PHI: (&str, [&str; 4]) = (
    "nu^-4",
    [
        "hbar*nu*(2*y - 1 + nu2) - s",
        "hbar*nu*(2*y - 1 - nu2) - s",
        "hbar*nu*(2*y - 1 + nu1) - H",
        "hbar*nu*(2*y - 1 - nu1) - H",
    ],
);

/// Published eigenvalue ladder of a chain. Energies are `H_i/(ħμ)`, the
/// `h` formulas are reduced energies `H/(2ħμ)`, Φ is given with `ħ = μ = 1`.
pub struct PrintedLadder {
    pub energies: &'static [(&'static str, &'static str)],
    /// Other printed forms of the same energy.
    pub variants: &'static [(&'static str, &'static str)],
    /// Eigenvalue of `A` on each link, with the printed root substituted.
    pub a_values: &'static [(usize, &'static str)],
    /// New Hamiltonian of each link.
    pub tops: &'static [(usize, &'static str)],
    pub phis: &'static [(usize, &'static str)],
    /// `(i, c)` for `μ_i > c`, final block.
    pub bounds: &'static [(usize, &'static str)],
    /// Bounds stated elsewhere for the same chain.
    pub bound_variants: &'static [(usize, &'static str)],
}

const PHI_C_FIRST: &str = "3*2^15*m*(m + 1)*(q + 1 - m)*(m + 1 + mu1)*(m + mu1)*(q + 1 - m + 2*mu2)";
const PHI_C_SECOND: &str = "3*2^19*(q - m)*(p + 1 - q)*(q - m + 1)*(q - m + 1 + mu2)*(q - m + mu2)*(p + 1 - q + 4*mu3)";

pub fn printed_ladder(chain: crate::systems::ChainLabel) -> PrintedLadder {
    use crate::systems::ChainLabel::*;
    match chain {
        C112 => PrintedLadder {
            energies: &[
                ("H1", "2*m + 1 + mu1"),
                ("H2", "4*q - 2*m + 2 + mu1 + mu2"),
                ("H3", "2*(q + p - m) + 4 + mu1 + mu2 + 2*mu3"),
            ],
            variants: &[],
            a_values: &[(0, "m + 1/2 + mu1/2"), (1, "2*q - m + 1 + mu1/2 + mu2/2")],
            tops: &[(0, "q + 1 + mu1/2 + mu2/2"), (1, "q + p - m + 1 + mu1/2 + mu2/2 + mu3")],
            phis: &[
                (0, "16*m*(q + 1 - m)*(m + mu1)*(q + 1 - m + mu2)"),
                (1, "3*2^16*(q - m)*(p + 1 - q)*(2*q - 1 - 2*m)*(2*q - 2*m + mu2)*(2*q - 1 - 2*m + mu2)*(p + 1 - q + 2*mu3)"),
            ],
            bounds: &[(1, "-1"), (2, "-1"), (3, "-1/2")],
            bound_variants: &[],
        },
        C122 => PrintedLadder {
            energies: &[
                ("H1", "2*(m + 1) + 1 + mu1"),
                ("H2", "4*q - 2*m + 5 + mu1 + 2*mu2"),
                ("H3", "2*(q + p - m) + 5 + mu1 + 2*mu2 + 2*mu3"),
            ],
            variants: &[],
            a_values: &[(0, "m + 3/2 + mu1/2"), (1, "2*q - m + 5/2 + mu1/2 + mu2")],
            tops: &[(0, "q + 3/2 + mu1/2 + mu2"), (1, "q + p - m + 5/2 + mu1/2 + mu2 + mu3")],
            phis: &[(0, PHI_C_FIRST), (1, "4*(q - m)*(p + 1 - q)*(q - m + mu2)*(p + 1 - q + 2*mu3)")],
            bounds: &[(1, "-1"), (2, "-1/2"), (3, "-1/2")],
            bound_variants: &[(2, "-1")],
        },
        C124 => PrintedLadder {
            energies: &[
                ("H1", "2*(m + 1) + 1 + mu1"),
                ("H2", "4*(q + 1) - 2*m + 5 + mu1 + 2*mu2"),
                ("H3", "2*(q + p - m) + 7 + mu1 + 2*mu2 + 4*mu3"),
            ],
            variants: &[],
            a_values: &[(0, "m + 3/2 + mu1/2"), (1, "2*q - m + 9/2 + mu1/2 + mu2")],
            tops: &[(0, "q + 3/2 + mu1/2 + mu2"), (1, "q + p - m + 7/2 + mu1/2 + mu2 + 2*mu3")],
            phis: &[(0, PHI_C_FIRST), (1, PHI_C_SECOND)],
            bounds: &[(1, "-1"), (2, "-1/2"), (3, "-1/4")],
            bound_variants: &[(2, "-1")],
        },
        C1248 => PrintedLadder {
            energies: &[
                ("H1", "2*(m + 1) + 1 + mu1"),
                ("H2", "4*(q + 1) - 2*m + 5 + mu1 + 2*mu2"),
                ("H3", "2*(3*(p + 3) - (q + 1) - (m + 1)) + 7 + mu1 + 2*mu2 + 4*mu3"),
                ("H4", "2*(2*p + l - q - m) + 15 + mu1 + 2*mu2 + 4*mu3 + 8*mu4"),
            ],
            variants: &[("H3", "2*(q + p - m) + 7 + mu1 + 2*mu2 + 4*mu3")],
            a_values: &[
                (0, "m + 3/2 + mu1/2"),
                (1, "2*q - m + 9/2 + mu1/2 + mu2"),
                (2, "3*p - q - m + 21/2 + mu1/2 + mu2 + 2*mu3"),
            ],
            tops: &[
                (0, "q + 3/2 + mu1/2 + mu2"),
                (1, "q + p - m + 7/2 + mu1/2 + mu2 + 2*mu3"),
                (2, "2*p - q - m + l + 15/2 + mu1/2 + mu2 + 2*mu3 + 4*mu4"),
            ],
            phis: &[
                (0, PHI_C_FIRST),
                (1, PHI_C_SECOND),
                (2, "9*2^13*(p - q)*(l + 1 - p)*(3*p - 3*q + 4)*(3*p - 3*q + 4 + 4*mu3)*(3*p - 3*q + 4*mu3)*(l + 1 - p + 8*mu4)"),
            ],
            bounds: &[(1, "-1"), (2, "-1/2"), (3, "-1/4"), (4, "-1/8")],
            bound_variants: &[(3, "-7/4")],
        },
    }
}
