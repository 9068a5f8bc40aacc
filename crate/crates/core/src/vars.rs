//! Symbol tables shared by polynomials and operators.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Role of a symbol inside a [`VarTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Configuration coordinate; Laurent exponents allowed.
    Position,
    /// Canonical momentum conjugate to the position with the same index.
    Momentum,
    /// Commuting parameter (central for the bracket).
    Param,
}

/// Ordered symbol table: positions, then momenta, then parameters.
///
/// Index `i < n` is position `i`, index `n + i` is its conjugate momentum,
/// indices `>= 2n` are parameters. Parameters flagged as Laurent may carry
/// negative exponents (used for adjoined square roots such as `sqrt(delta)`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    dim: usize,
    laurent: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarTableError {
    LengthMismatch { positions: usize, momenta: usize },
    Duplicate(String),
    UnknownLaurent(String),
}

impl fmt::Display for VarTableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarTableError::LengthMismatch { positions, momenta } => {
                write!(f, "{positions} positions but {momenta} momenta")
            }
            VarTableError::Duplicate(s) => write!(f, "duplicate symbol `{s}`"),
            VarTableError::UnknownLaurent(s) => write!(f, "Laurent flag on unknown parameter `{s}`"),
        }
    }
}

impl core::error::Error for VarTableError {}

impl VarTable {
    pub fn new(positions: &[&str], momenta: &[&str], params: &[&str]) -> Result<Arc<Self>, VarTableError> {
        Self::with_laurent_params(positions, momenta, params, &[])
    }

    pub fn with_laurent_params(
        positions: &[&str],
        momenta: &[&str],
        params: &[&str],
        laurent_params: &[&str],
    ) -> Result<Arc<Self>, VarTableError> {
        if positions.len() != momenta.len() {
            return Err(VarTableError::LengthMismatch { positions: positions.len(), momenta: momenta.len() });
        }
        let names: Vec<String> = positions.iter().chain(momenta).chain(params).map(|s| s.to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(VarTableError::Duplicate(a.clone()));
            }
        }
        let n = positions.len();
        let mut laurent: Vec<bool> = (0..names.len()).map(|i| i < n).collect();
        for lp in laurent_params {
            match params.iter().position(|p| p == lp) {
                Some(j) => laurent[2 * n + j] = true,
                None => return Err(VarTableError::UnknownLaurent(lp.to_string())),
            }
        }
        Ok(Arc::new(VarTable { names, dim: n, laurent }))
    }

    /// Number of degrees of freedom.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn kind(&self, i: usize) -> VarKind {
        if i < self.dim {
            VarKind::Position
        } else if i < 2 * self.dim {
            VarKind::Momentum
        } else {
            VarKind::Param
        }
    }

    pub fn allows_negative(&self, i: usize) -> bool {
        self.laurent[i]
    }

    pub fn position(&self, k: usize) -> usize {
        k
    }

    pub fn momentum(&self, k: usize) -> usize {
        self.dim + k
    }

    pub fn positions(&self) -> &[String] {
        &self.names[..self.dim]
    }

    pub fn momenta(&self) -> &[String] {
        &self.names[self.dim..2 * self.dim]
    }

    pub fn params(&self) -> &[String] {
        &self.names[2 * self.dim..]
    }

    /// Same table extended with extra parameters (appended at the end).
    pub fn extend_params(&self, extra: &[&str]) -> Result<Arc<Self>, VarTableError> {
        let pos: Vec<&str> = self.positions().iter().map(|s| s.as_str()).collect();
        let mom: Vec<&str> = self.momenta().iter().map(|s| s.as_str()).collect();
        let mut par: Vec<&str> = self.params().iter().map(|s| s.as_str()).collect();
        par.extend_from_slice(extra);
        let lau: Vec<&str> = (2 * self.dim..self.len())
            .filter(|&i| self.laurent[i])
            .map(|i| self.names[i].as_str())
            .collect();
        Self::with_laurent_params(&pos, &mom, &par, &lau)
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VarTable")
            .field("positions", &self.positions())
            .field("momenta", &self.momenta())
            .field("params", &self.params())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let vt = VarTable::new(&["x", "y"], &["px", "py"], &["k", "hbar"]).unwrap();
        assert_eq!(vt.index("py"), Some(3));
        assert_eq!(vt.kind(3), VarKind::Momentum);
        assert_eq!(vt.kind(4), VarKind::Param);
        assert!(vt.allows_negative(1));
        assert!(!vt.allows_negative(4));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(VarTable::new(&["x"], &[], &[]).is_err());
        assert!(VarTable::new(&["x"], &["x"], &[]).is_err());
        assert!(VarTable::with_laurent_params(&[], &[], &["a"], &["b"]).is_err());
    }
}
