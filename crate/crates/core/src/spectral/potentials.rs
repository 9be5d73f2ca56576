//! Potentials of the transformed pair `M± = -∂² + 1 + a±` and the scalars
//! `I_ω`, `ε_ω`, `ϱ_ω`.

use crate::nonlinearity::NonlinearityModel;
use crate::numerics::jet::Jet;
use crate::numerics::quad::trapezoid;
use crate::profile::SolitonProfile;

/// Coefficient of `s^σ/ω` in `a⁺` for a single power term.
pub fn plus_coef(a: f64, sigma: f64) -> f64 {
    a * (sigma - 1.0) / (sigma + 1.0)
}

/// Coefficient of `s^σ/ω` in `a⁻` for a single power term.
pub fn minus_coef(a: f64, sigma: f64) -> f64 {
    -a * (2.0 * sigma - 1.0) * (sigma - 1.0) / (sigma + 1.0)
}

#[derive(Clone, Debug)]
pub struct Potentials {
    pub omega: f64,
    pub a_plus: Vec<f64>,
    pub a_minus: Vec<f64>,
    pub b_plus: Vec<f64>,
    pub b_minus: Vec<f64>,
    pub i_omega: f64,
    /// Difference between the trapezoid values at spacing h and 2h.
    pub i_omega_err: f64,
    pub eps_omega: f64,
    pub rho_omega: f64,
}

/// Jets of `a⁺` and `a⁻` given the jet of `Q`.
pub fn potential_jets(model: &NonlinearityModel, omega: f64, q: &Jet) -> (Jet, Jet) {
    if model.is_zero() {
        return (Jet::default(), Jet::default());
    }
    let s = *q * *q * omega;
    let ap = model.power_sum_jet(&s, 0.0, plus_coef) * (1.0 / omega);
    let am = model.power_sum_jet(&s, 0.0, minus_coef) * (1.0 / omega);
    (ap, am)
}

/// Potential of `L₊ = -∂² + u₊` as a jet.
pub fn l_plus_potential_jet(model: &NonlinearityModel, omega: f64, q: &Jet) -> Jet {
    let q2 = *q * *q;
    let mut u = Jet::constant(1.0) - q2 * 3.0;
    if !model.is_zero() {
        u = u - model.power_sum_jet(&(q2 * omega), 0.0, |a, sg| a * (1.0 + 2.0 * sg)) * (1.0 / omega);
    }
    u
}

/// Potential of `L₋ = -∂² + u₋` as a jet.
pub fn l_minus_potential_jet(model: &NonlinearityModel, omega: f64, q: &Jet) -> Jet {
    let q2 = *q * *q;
    let mut u = Jet::constant(1.0) - q2;
    if !model.is_zero() {
        u = u - model.power_sum_jet(&(q2 * omega), 0.0, |a, _| a) * (1.0 / omega);
    }
    u
}

/// Pointwise `L₊` potential.
pub fn l_plus_potential(model: &NonlinearityModel, omega: f64, q: f64) -> f64 {
    let mut u = 1.0 - 3.0 * q * q;
    if !model.is_zero() {
        u -= model.power_sum(omega * q * q, 0.0, |a, sg| a * (1.0 + 2.0 * sg)) / omega;
    }
    u
}

/// Pointwise `L₋` potential.
pub fn l_minus_potential(model: &NonlinearityModel, omega: f64, q: f64) -> f64 {
    let mut u = 1.0 - q * q;
    if !model.is_zero() {
        u -= model.power_sum(omega * q * q, 0.0, |a, _| a) / omega;
    }
    u
}

pub fn compute_potentials(model: &NonlinearityModel, profile: &SolitonProfile) -> Potentials {
    let w = profile.omega;
    let n = profile.q.len();
    let (mut a_plus, mut a_minus) = (vec![0.0; n], vec![0.0; n]);
    if !model.is_zero() {
        for (i, &q) in profile.q.iter().enumerate() {
            let s = w * q * q;
            a_plus[i] = model.power_sum(s, 0.0, plus_coef) / w;
            a_minus[i] = model.power_sum(s, 0.0, minus_coef) / w;
        }
    }
    let b_plus: Vec<f64> = a_plus.iter().zip(&a_minus).map(|(p, m)| 0.5 * (p + m)).collect();
    let b_minus: Vec<f64> = a_plus.iter().zip(&a_minus).map(|(p, m)| 0.5 * (p - m)).collect();
    let h = profile.grid.h();
    let sum: Vec<f64> = a_plus.iter().zip(&a_minus).map(|(p, m)| -(p + m)).collect();
    let i_omega = trapezoid(&sum, h);
    let coarse: Vec<f64> = sum.iter().step_by(2).copied().collect();
    let i_omega_err = (i_omega - trapezoid(&coarse, 2.0 * h)).abs();
    let eps_omega = model.epsilon(w);
    let rho_omega = if i_omega > 0.0 { eps_omega * eps_omega / i_omega } else { f64::INFINITY };
    Potentials { omega: w, a_plus, a_minus, b_plus, b_minus, i_omega, i_omega_err, eps_omega, rho_omega }
}
