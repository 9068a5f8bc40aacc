#![no_std]
//! Exact algebra for superintegrable anisotropic-oscillator Hamiltonian chains.

extern crate alloc;

pub mod error;
pub mod fit;
pub mod linalg;
pub mod oscillator;
pub mod parse;
pub mod phase;
pub mod poly;
pub mod reference;
pub mod ring;
pub mod scalar;
pub mod spectrum;
pub mod systems;
pub mod vars;
pub mod weyl;

pub use error::AlgebraError;
pub use poly::{Monomial, PhasePoly, Poly, TermOrder};
pub use scalar::{Coeff, Gaussian, Scalar};
pub use vars::{VarKind, VarTable};
pub use weyl::DiffOperator;
