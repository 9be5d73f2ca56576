//! Fermi golden rule quantities.

pub mod gamma0;
pub mod general;
pub mod moments;
pub mod pair;

pub use gamma0::{gamma0, gamma0_scan, Gamma0Result};
pub use general::{gamma_general, GammaGeneral};
pub use moments::{moment_table, recurrence_residuals, MomentTable};
pub use pair::{solve_g_pair, solve_g_pair_with, FgrPair};
