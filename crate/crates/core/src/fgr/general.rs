//! Fermi golden rule constant `Γ(ω)` for a general nonlinearity.

use super::pair::{orthogonality, solve_g_pair, FgrPair, Orthogonality};
use crate::error::Result;
use crate::profile::{lambda_omega_q, profile_omega_derivative};
use crate::spectral::farfield::line_inner;
use crate::spectral::mode::{solve_internal_mode, InternalMode};
use crate::{Grid, NonlinearityModel};

#[derive(Clone, Debug)]
pub struct GammaGeneral {
    pub omega: f64,
    pub gamma: f64,
    /// `∫G₁g₁ + ∫G₂g₂` without the projections.
    pub gamma_unprojected: f64,
    /// Positivity of `Γ(ω)`.
    pub h3_holds: bool,
    pub orthogonality: Orthogonality,
}

/// Relative step for `∂_ω Q_ω` in `Λ_ω Q_ω`.
pub const OMEGA_STEP: f64 = 1e-3;

pub fn gamma_from(mode: &InternalMode, pair: &FgrPair, lambda_q: &[f64]) -> GammaGeneral {
    let model = &mode.profile.model;
    let w = mode.omega;
    let h = mode.grid.h();
    let n = mode.grid.len();
    let (v1, v2) = (&mode.v1, &mode.v2);
    let mut g1c = vec![0.0; n];
    let mut g2c = vec![0.0; n];
    for i in 0..n {
        let q = mode.profile.q[i];
        let s = w * q * q;
        // 3 + 3g'(s) + 2s g''(s) and 1 + g'(s) for power sums
        let big = 3.0 + model.power_sum(s, -1.0, |a, sg| a * sg * (2.0 * sg + 1.0));
        let small = 1.0 + model.power_sum(s, -1.0, |a, sg| a * sg);
        let g = v1[i] * v1[i] * q * big;
        let hh = v2[i] * v2[i] * q * small;
        g1c[i] = g - hh;
        g2c[i] = 2.0 * v1[i] * v2[i] * q * small;
    }
    let pairing = mode.v_pairing();
    let direct1 = line_inner(&g1c, None, &pair.g1, None, h);
    let direct2 = line_inner(&g2c, None, &pair.g2, None, h);
    let c1 = line_inner(&g1c, None, v1, None, h) / pairing;
    let c2 = line_inner(&g2c, None, v2, None, h) / pairing;
    let p1 = line_inner(v2, Some(mode.v2_tail()), &pair.g1, Some(pair.g1_tail()), h);
    let p2 = line_inner(v1, Some(mode.v1_tail()), &pair.g2, Some(pair.g2_tail()), h);
    let gamma = direct1 - c1 * p1 + direct2 - c2 * p2;
    GammaGeneral {
        omega: w,
        gamma,
        gamma_unprojected: direct1 + direct2,
        h3_holds: gamma > 0.0,
        orthogonality: orthogonality(mode, pair, lambda_q),
    }
}

pub fn gamma_general(model: &NonlinearityModel, omega: f64, grid: Grid) -> Result<GammaGeneral> {
    let mode = solve_internal_mode(model, omega, grid)?;
    let pair = solve_g_pair(&mode)?;
    let dq = profile_omega_derivative(model, omega, grid, OMEGA_STEP)?;
    let lq = lambda_omega_q(&mode.profile, &dq);
    Ok(gamma_from(&mode, &pair, &lq))
}
