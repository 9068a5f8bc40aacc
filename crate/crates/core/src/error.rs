//! Error type shared by the algebra modules.

use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    /// Operands built over different symbol tables.
    TableMismatch,
    UnknownSymbol(String),
    /// Substitution would leave the Laurent ring (e.g. a sum under a negative power).
    UnsupportedSubstitution(String),
    /// A structure-constant fit left a nonzero residual.
    InconsistentFit { relation: String, residual: String },
    /// A Casimir candidate fails to commute with a generator.
    CentralityViolation { generator: String, bracket: String },
    /// An identity that must hold exactly has a nonzero residual.
    IdentityFailure { identity: String, residual: String },
    /// Reduction to a polynomial in a single generator left phase-space terms.
    NotReducible { residual: String },
    UnsupportedRegime(String),
    /// Two determinations of the same structure function disagree.
    Inconsistent(String),
    NoPositiveBranch(String),
    DomainViolation(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::TableMismatch => write!(f, "operands use different symbol tables"),
            AlgebraError::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            AlgebraError::UnsupportedSubstitution(s) => write!(f, "unsupported substitution: {s}"),
            AlgebraError::InconsistentFit { relation, residual } => {
                write!(f, "fit of {relation} leaves residual {residual}")
            }
            AlgebraError::CentralityViolation { generator, bracket } => {
                write!(f, "Casimir does not commute with {generator}: {bracket}")
            }
            AlgebraError::IdentityFailure { identity, residual } => {
                write!(f, "identity {identity} fails with residual {residual}")
            }
            AlgebraError::NotReducible { residual } => write!(f, "not a polynomial in H: remainder {residual}"),
            AlgebraError::UnsupportedRegime(s) => write!(f, "unsupported regime: {s}"),
            AlgebraError::Inconsistent(s) => write!(f, "inconsistent: {s}"),
            AlgebraError::NoPositiveBranch(s) => write!(f, "no positive branch: {s}"),
            AlgebraError::DomainViolation(s) => write!(f, "parameter domain violation: {s}"),
        }
    }
}

impl core::error::Error for AlgebraError {}
