//! Finite-difference eigenvalue oracle for `L₋L₊ V₁ = λ² V₁`, independent of
//! the Birman-Schwinger construction.
//!
//! Works on the even half-line: the profile's uniform grid up to `L`, then a
//! geometrically stretched tail out to many decay lengths of the expected
//! mode, Neumann at 0 and Dirichlet at the far end.

use super::potentials::{l_minus_potential, l_plus_potential, Potentials};
use crate::error::{Error, Result};
use crate::numerics::banded::BandMatrix;
use crate::profile::SolitonProfile;

const STRETCH: f64 = 1.01;
const DECAY_LENGTHS: f64 = 40.0;
const MAX_ITER: usize = 500;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub lambda: f64,
    /// Eigenvalue of `L₋L₊` (`λ²`).
    pub theta: f64,
    pub iterations: usize,
    pub nodes: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

fn half_line_nodes(profile: &SolitonProfile, extent: f64) -> Vec<f64> {
    let g = profile.grid;
    let h = g.h();
    let mut nodes: Vec<f64> = (0..=g.n).map(|j| j as f64 * h).collect();
    let mut step = h;
    let mut y = g.half_length;
    while y < extent {
        step *= STRETCH;
        y += step;
        nodes.push(y);
    }
    nodes
}

/// `-∂² + u` on the half-line nodes.
fn operator(nodes: &[f64], potential: &[f64]) -> BandMatrix {
    let m = nodes.len();
    let mut a = BandMatrix::zeros(m, 1, 1);
    let h0 = nodes[1] - nodes[0];
    // even symmetry across 0
    a.set(0, 0, 2.0 / (h0 * h0) + potential[0]);
    a.set(0, 1, -2.0 / (h0 * h0));
    for i in 1..m - 1 {
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        a.set(i, i - 1, -2.0 / (hm * (hm + hp)));
        a.set(i, i, 2.0 / (hm * hp) + potential[i]);
        a.set(i, i + 1, -2.0 / (hp * (hm + hp)));
    }
    // Dirichlet: the last unknown is pinned to zero
    a.set(m - 1, m - 1, 1.0);
    a.set(m - 1, m - 2, 0.0);
    a
}

pub fn fd_mode_oracle(profile: &SolitonProfile, potentials: &Potentials) -> Result<OracleResult> {
    let model = &profile.model;
    let w = if model.is_zero() { 1.0 } else { profile.omega };
    let i_omega = potentials.i_omega;
    let alpha_guess = if i_omega > 0.0 { 0.25 * i_omega } else { 0.1 };
    let nodes = half_line_nodes(profile, DECAY_LENGTHS / alpha_guess);
    let c = profile.grid.center();
    let q: Vec<f64> = (0..nodes.len()).map(|i| if i <= profile.grid.n { profile.q[c + i] } else { 0.0 }).collect();
    let up: Vec<f64> = q.iter().map(|&x| l_plus_potential(model, w, x)).collect();
    let um: Vec<f64> = q.iter().map(|&x| l_minus_potential(model, w, x)).collect();
    let lp = operator(&nodes, &up);
    let lm = operator(&nodes, &um);
    let mut prod = lm.mul(&lp);
    let m = nodes.len();

    // keep the Dirichlet row trivial after the product
    prod.set(m - 1, m - 3, 0.0);
    prod.set(m - 1, m - 2, 0.0);
    prod.set(m - 1, m - 1, 1.0);

    // shift below the expected eigenvalue, away from the continuum at 1
    let shift = 1.0 - 3.0 * alpha_guess * alpha_guess;
    let mut shifted = prod.clone();
    for i in 0..m - 1 {
        shifted.add(i, i, -shift);
    }
    let lu = shifted.factor().ok_or_else(|| Error::Oracle("singular shifted matrix".into()))?;

    let mut v: Vec<f64> = nodes.iter().map(|y| (-alpha_guess * y).exp()).collect();
    v[m - 1] = 0.0;
    let mut theta = f64::NAN;
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=MAX_ITER {
        let wv = lu.solve(&v);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let vw: f64 = v.iter().zip(&wv).map(|(a, b)| a * b).sum();
        let next = shift + vv / vw;
        let norm = wv.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = wv.iter().map(|x| x / norm).collect();
        iterations = it;
        if (next - theta).abs() <= 1e-13 {
            theta = next;
            converged = true;
            break;
        }
        theta = next;
    }
    if !converged {
        return Err(Error::Oracle(format!("shift-invert iteration did not converge in {MAX_ITER} steps")));
    }
    if theta >= 1.0 || theta <= 0.0 {
        return Err(Error::Oracle(format!(
            "no isolated eigenvalue below the threshold 1 (nearest is {theta}); resonance makes the mode ambiguous"
        )));
    }
    let lambda = theta.sqrt();
    let sign = if v[0] < 0.0 { -1.0 } else { 1.0 };
    let v1: Vec<f64> = v.iter().map(|x| sign * x).collect();
    let mut v2 = lp.matvec(&v1);
    v2[m - 1] = 0.0;
    v2.iter_mut().for_each(|x| *x /= lambda);
    Ok(OracleResult { lambda, theta, iterations, nodes, v1, v2 })
}
