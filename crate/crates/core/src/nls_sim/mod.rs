//! Split-step evolution of `iψ_t + ψ_xx + |ψ|²ψ + g(|ψ|²)ψ = 0` on a periodic
//! grid, with modulation tracking and internal-mode amplitude extraction.

mod decompose;
mod run;
mod state;

pub use decompose::{extract_b, modulation_decompose, Decomposition, ModeSnapshot, SolitonFamily};
pub use run::{run_experiment, DiagnosticsRow, RunSummary, SimulationReport, CSV_HEADER};
pub use state::SimulationState;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::NonlinearityModel;

#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    None,
    /// `ε (V₁ + iV₂)(√ω₀ x) √ω₀` added to the soliton.
    InternalMode,
    /// Samples added to the soliton on the x-grid.
    Custom(Vec<Complex64>),
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub model: NonlinearityModel,
    pub omega0: f64,
    pub perturbation: Perturbation,
    /// `ε` in units of the rescaled profile.
    pub amplitude: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Time between decompositions.
    pub sample_every: f64,
    pub domain_half: f64,
    pub points: usize,
    /// Weak absorbing layer near `±X`; off by default.
    pub absorbing_mask: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        let omega0 = 0.05;
        Self {
            model: NonlinearityModel::Power { a: 1.0, sigma: 2.0 },
            omega0,
            perturbation: Perturbation::InternalMode,
            amplitude: 0.02 * f64::sqrt(omega0),
            dt: 0.05,
            t_end: 2000.0,
            sample_every: 2.0,
            domain_half: 200.0,
            points: 8192,
            absorbing_mask: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega0", self.omega0),
            ("dt", self.dt),
            ("t_end", self.t_end),
            ("sample_every", self.sample_every),
            ("domain_half", self.domain_half),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{k} must be positive, got {v}")));
            }
        }
        if !(self.amplitude >= 0.0) {
            return Err(Error::Config(format!("amplitude must be non-negative, got {}", self.amplitude)));
        }
        if self.points < 16 || !self.points.is_power_of_two() {
            return Err(Error::Config(format!("points must be a power of two >= 16, got {}", self.points)));
        }
        if self.sample_every < self.dt {
            return Err(Error::Config("sample_every must be at least dt".into()));
        }
        if let Perturbation::Custom(v) = &self.perturbation {
            if v.len() != self.points {
                return Err(Error::Config(format!("custom perturbation has {} samples, expected {}", v.len(), self.points)));
            }
        }
        Ok(())
    }
}
