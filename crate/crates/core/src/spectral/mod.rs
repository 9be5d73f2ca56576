//! Linearized potentials, the internal mode and the transformed operator.

pub mod farfield;
pub mod mode;
pub mod operators;
pub mod oracle;
pub mod potentials;
pub mod transformed;

pub use mode::{birman_schwinger_r, internal_mode_from, solve_internal_mode, InternalMode, LinearSolver, ModeOptions};
pub use oracle::{fd_mode_oracle, OracleResult};
pub use potentials::{compute_potentials, Potentials};
pub use transformed::{transformed_potentials, TransformedPotentials};
