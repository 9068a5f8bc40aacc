//! Floating-point oracles: trajectories, separable spectra, 1D grids, operator actions.

pub mod action;
pub mod float;
pub mod grid;
pub mod integrator;
pub mod oracle;

#[derive(Debug, thiserror::Error)]
pub enum NumericError {
    #[error("parameter `{0}` has no value")]
    UnboundParameter(String),
    #[error("Hamiltonian is not of the form T(p) + V(x): mixed term {0}")]
    NotSeparable(String),
    #[error("trajectory reached |x| = {coordinate:e} < {floor:e} at t = {time}")]
    Singularity { time: f64, coordinate: f64, floor: f64 },
    #[error("bad initial state: {0}")]
    BadState(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
}
