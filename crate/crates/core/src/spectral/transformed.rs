//! Coefficients of the transformed fourth-order operator
//! `K = ∂⁴ − 2∂² + K₂∂² + K₁∂ + K₀ + 1` and the virial weights `Y₁`, `Y₀`.

use super::mode::InternalMode;
use super::potentials::potential_jets;
use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::numerics::quad::trapezoid;

#[derive(Clone, Debug)]
pub struct TransformedPotentials {
    pub k2: Vec<f64>,
    pub k1: Vec<f64>,
    pub k0: Vec<f64>,
    pub y1: Vec<f64>,
    pub y0: Vec<f64>,
    pub int_y0: f64,
}

/// Jets of `K₂`, `K₁`, `K₀` at node `i`.
pub fn k_jets(mode: &InternalMode, i: usize) -> (Jet, Jet, Jet) {
    let lam = mode.lambda;
    let w1 = mode.w1_jets[i];
    let w2 = mode.w2_jets[i];
    let q = mode.profile.jet(i);
    let (ap, _) = potential_jets(&mode.profile.model, mode.omega, &q);
    let r = w2.recip();
    let d1 = w2.diff();
    let d2 = d1.diff();
    let d3 = d2.diff();
    let d4 = d3.diff();
    // ratios W₂^(k)/W₂ and W₁^(k)/W₂
    let t1 = d1 * r;
    let t2 = d2 * r;
    let t3 = d3 * r;
    let t4 = d4 * r;
    let u0 = w1 * r;
    let u1 = w1.diff() * r;
    let u2 = w1.diff().diff() * r;
    let app = ap.diff();

    let k2 = Jet::constant(1.0) - u0 * lam + t2 * 3.0 - t1 * t1 * 4.0 - ap;
    let k1 = u1 * (-3.0 * lam) + u0 * t1 * (3.0 * lam) + t3 * 3.0 - t1 * t2 * 11.0 + t1 * t1 * t1 * 8.0 - app;
    let t1sq = t1 * t1;
    let k0 = u2 * (-2.0 * lam) + u1 * t1 * (5.0 * lam) + t1sq * 2.0 - u0 * t1sq * (3.0 * lam) + u0 * t2 * lam - t2
        + t4
        - t1 * t3 * 5.0
        - t2 * t2 * 3.0
        + t2 * t1sq * 15.0
        - t1sq * t1sq * 8.0
        - app * t1
        - ap * t2
        + ap * t1sq * 2.0
        + (lam * lam - 1.0);
    (k2, k1, k0)
}

pub fn transformed_potentials(mode: &InternalMode) -> Result<TransformedPotentials> {
    let ys = mode.grid.nodes();
    let n = ys.len();
    if let Some(i) = (0..n).find(|&i| !(mode.w2[i] > 0.5 * (-mode.alpha * ys[i].abs()).exp())) {
        return Err(Error::DegenerateDenominator { y: ys[i] });
    }
    let mut k2 = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k0 = vec![0.0; n];
    let mut y1 = vec![0.0; n];
    let mut y0 = vec![0.0; n];
    for i in 0..n {
        let (a, b, c) = k_jets(mode, i);
        let y = ys[i];
        k2[i] = a.value();
        k1[i] = b.value();
        k0[i] = c.value();
        y1[i] = -2.0 * a.value() - y * a.derivative(1) + 2.0 * y * b.value();
        y0[i] = 0.5 * (a.derivative(2) - b.derivative(1) - 2.0 * y * c.derivative(1));
    }
    let int_y0 = trapezoid(&y0, mode.grid.h());
    Ok(TransformedPotentials { k2, k1, k0, y1, y0, int_y0 })
}
