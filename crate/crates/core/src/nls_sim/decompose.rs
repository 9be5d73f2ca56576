//! Modulation decomposition `ζ[ψ, (γ, ω)] = Q_ω + u` with `⟨u, Q_ω⟩ = 0` and
//! `⟨u, iΛ_ωQ_ω⟩ = 0`, and the internal-mode amplitude of `u`.

use num_complex::Complex64;

use super::state::{matched_grid, SimulationState};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::profile::solve_profile;
use crate::spectral::mode::InternalMode;
use crate::NonlinearityModel;

const RELATIVE_STEP: f64 = 1e-3;
const MAX_NEWTON: usize = 50;
const CONSTRAINT_TOL: f64 = 1e-10;

/// `Q_ω`, `Λ_ωQ_ω` and their ω-derivatives on the y-grid matched to the
/// simulation grid (the last node `y = L` is dropped).
#[derive(Clone, Debug)]
pub struct SolitonFamily {
    pub omega: f64,
    pub grid: Grid,
    pub y: Vec<f64>,
    pub q: Vec<f64>,
    pub dq: Vec<f64>,
    pub lambda_q: Vec<f64>,
    pub dlambda_q: Vec<f64>,
}

impl SolitonFamily {
    pub fn new(model: &NonlinearityModel, omega: f64, domain_half: f64, points: usize) -> Result<Self> {
        let grid = matched_grid(omega, domain_half, points);
        let d = RELATIVE_STEP * omega;
        let mid = solve_profile(model, omega, grid)?;
        let lo = solve_profile(model, omega - d, grid)?;
        let hi = solve_profile(model, omega + d, grid)?;
        let m = points;
        let ys = grid.nodes();
        let mut out = Self {
            omega,
            grid,
            y: ys[..m].to_vec(),
            q: mid.q[..m].to_vec(),
            dq: vec![0.0; m],
            lambda_q: vec![0.0; m],
            dlambda_q: vec![0.0; m],
        };
        for j in 0..m {
            let y = ys[j];
            let dq = (hi.q[j] - lo.q[j]) / (2.0 * d);
            let dqp = (hi.qp[j] - lo.qp[j]) / (2.0 * d);
            let d2q = (hi.q[j] - 2.0 * mid.q[j] + lo.q[j]) / (d * d);
            out.dq[j] = dq;
            out.lambda_q[j] = 0.5 * (mid.q[j] + y * mid.qp[j]) + omega * dq;
            out.dlambda_q[j] = 0.5 * (dq + y * dqp) + dq + omega * d2q;
        }
        Ok(out)
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub gamma: f64,
    pub omega: f64,
    /// `u = u₁ + iu₂` on the y-grid of `family`.
    pub u: Vec<Complex64>,
    pub residuals: [f64; 2],
    pub iterations: usize,
    pub family: SolitonFamily,
}

fn dot(a: impl Iterator<Item = f64>, h: f64) -> f64 {
    a.sum::<f64>() * h
}

/// Newton iteration on the two orthogonality conditions, started from
/// `(γ, ω)`.
pub fn modulation_decompose(
    state: &mut SimulationState,
    gamma: f64,
    omega: f64,
    domain_half: f64,
) -> Result<Decomposition> {
    let m = state.psi.len();
    let dpsi = state.derivative();
    let xpsi: Vec<Complex64> = (0..m).map(|j| state.psi[j] + dpsi[j] * state.x[j]).collect();
    let (mut g, mut w) = (gamma, omega);
    let model = state.model.clone();
    for it in 0..=MAX_NEWTON {
        if !(w > 0.0) {
            break;
        }
        let fam = SolitonFamily::new(&model, w, domain_half, m)?;
        let h = fam.h();
        let rot = Complex64::from_polar(1.0 / w.sqrt(), -g);
        let u: Vec<Complex64> = (0..m).map(|j| state.psi[j] * rot - fam.q[j]).collect();
        let c1 = dot((0..m).map(|j| u[j].re * fam.q[j]), h);
        let c2 = dot((0..m).map(|j| u[j].im * fam.lambda_q[j]), h);
        if c1.abs().max(c2.abs()) <= CONSTRAINT_TOL {
            return Ok(Decomposition { gamma: g, omega: w, u, residuals: [c1, c2], iterations: it, family: fam });
        }
        let du: Vec<Complex64> = (0..m).map(|j| xpsi[j] * rot * (-0.5 / w) - fam.dq[j]).collect();
        let j11 = dot((0..m).map(|j| u[j].im * fam.q[j]), h);
        let j21 = dot((0..m).map(|j| -(u[j].re + fam.q[j]) * fam.lambda_q[j]), h);
        let j12 = dot((0..m).map(|j| du[j].re * fam.q[j] + u[j].re * fam.dq[j]), h);
        let j22 = dot((0..m).map(|j| du[j].im * fam.lambda_q[j] + u[j].im * fam.dlambda_q[j]), h);
        let det = j11 * j22 - j12 * j21;
        if !(det.abs() > 0.0) {
            break;
        }
        g -= (j22 * c1 - j12 * c2) / det;
        w -= (-j21 * c1 + j11 * c2) / det;
    }
    Err(Error::DecompositionLost { t: state.t, reason: format!("Newton on the modulation constraints failed near omega = {w}") })
}

/// `V₁`, `V₂` of a mode evaluated on another grid through the stored jets.
#[derive(Clone, Debug)]
pub struct ModeSnapshot {
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
}

impl ModeSnapshot {
    pub fn on_nodes(mode: &InternalMode, ys: &[f64]) -> Self {
        let g = mode.grid;
        let h = g.h();
        let last = g.len() - 1;
        let (t1, t2) = (mode.v1_tail(), mode.v2_tail());
        let mut v1 = Vec::with_capacity(ys.len());
        let mut v2 = Vec::with_capacity(ys.len());
        for &y in ys {
            if y.abs() > g.half_length {
                let t = y.abs() - g.half_length;
                v1.push(t1.eval(t));
                v2.push(t2.eval(t));
                continue;
            }
            let i = (((y + g.half_length) / h).round() as usize).min(last);
            let off = y - g.node(i);
            v1.push(mode.v1_jets[i].eval(off));
            v2.push(mode.v2_jets[i].eval(off));
        }
        Self { v1, v2 }
    }
}

/// `b = ⟨u₁,V₂⟩/⟨V₁,V₂⟩ + i ⟨u₂,V₁⟩/⟨V₁,V₂⟩` and the remainder
/// `v = u − (b₁V₁ + i b₂V₂)`, with sums over the given nodes.
pub fn extract_b(u: &[Complex64], snap: &ModeSnapshot, h: f64) -> (Complex64, Vec<Complex64>) {
    let n = u.len();
    let pairing = dot((0..n).map(|j| snap.v1[j] * snap.v2[j]), h);
    let b1 = dot((0..n).map(|j| u[j].re * snap.v2[j]), h) / pairing;
    let b2 = dot((0..n).map(|j| u[j].im * snap.v1[j]), h) / pairing;
    let v = (0..n).map(|j| u[j] - Complex64::new(b1 * snap.v1[j], b2 * snap.v2[j])).collect();
    (Complex64::new(b1, b2), v)
}
