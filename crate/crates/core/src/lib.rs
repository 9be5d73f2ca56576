//! Numerical laboratory for solitary waves of the perturbed cubic NLS
//! `i ψ_t + ψ_xx + |ψ|²ψ + g(|ψ|²)ψ = 0`: profiles, the internal mode of the
//! linearized operator pair, transformed potentials, Fermi golden rule
//! constants and a split-step simulator.

pub mod error;
pub mod fgr;
pub mod grid;
pub mod nls_sim;
pub mod nonlinearity;
pub mod numerics;
pub mod profile;
pub mod spectral;
pub mod validate;

pub use error::{Error, Result};
pub use grid::Grid;
pub use nonlinearity::NonlinearityModel;
