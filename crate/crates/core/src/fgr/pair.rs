//! Bounded even solutions of `M₊h₁ = 2λh₂`, `M₋h₂ = 2λh₁` close to
//! `-cos(τy)`, and the pair `g₁ = (S*)²h₁`, `g₂ = L₊g₁/(2λ)`.

use crate::error::{Error, Result};
use crate::numerics::fd;
use crate::numerics::jet::{second_order_pair, Jet};
use crate::numerics::krylov::{gmres, GmresOptions};
use crate::numerics::quad::{convolve, cumulative_from_center, trapezoid, Derivs, Kernel};
use crate::profile::SolitonProfile;
use crate::spectral::farfield::{grid_norm, line_inner, Tail};
use crate::spectral::mode::{s_star_squared, InternalMode};
use crate::spectral::potentials::{l_plus_potential_jet, potential_jets, Potentials};

#[derive(Clone, Debug)]
pub struct FgrPair {
    pub lambda: f64,
    pub tau: f64,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub g1_jets: Vec<Jet>,
    pub g2_jets: Vec<Jet>,
    /// Upper bound on the sup-norm of the integral operator.
    pub operator_bound: f64,
    pub gmres_iterations: usize,
}

impl FgrPair {
    pub fn g1_tail(&self) -> Tail {
        Tail::oscillatory_from_jet(self.g1_jets.last().unwrap(), self.tau)
    }

    pub fn g2_tail(&self) -> Tail {
        Tail::oscillatory_from_jet(self.g2_jets.last().unwrap(), self.tau)
    }
}

struct Upsilon<'a> {
    bp: &'a [f64],
    bm: &'a [f64],
    cos: Vec<f64>,
    sin: Vec<f64>,
    tau: f64,
    mu: f64,
    h: f64,
    center: usize,
}

impl Upsilon<'_> {
    fn forcing(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.bp.len();
        let f1 = (0..n).map(|i| -self.bp[i] * u[i] - self.bm[i] * u[n + i]).collect();
        let f2 = (0..n).map(|i| -self.bm[i] * u[i] - self.bp[i] * u[n + i]).collect();
        (f1, f2)
    }

    fn cumulative(&self, f: &[f64]) -> Vec<f64> {
        let d1 = fd::derivative(f, self.h, 1, 4);
        let d3 = fd::derivative(f, self.h, 3, 4);
        cumulative_from_center(f, &d1, &d3, self.h, self.center)
    }

    /// `C = ∫₀^y cos(τy')F₁`, `S = ∫₀^y sin(τy')F₁`.
    fn moments(&self, f1: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let fc: Vec<f64> = f1.iter().zip(&self.cos).map(|(a, b)| a * b).collect();
        let fs: Vec<f64> = f1.iter().zip(&self.sin).map(|(a, b)| a * b).collect();
        (self.cumulative(&fc), self.cumulative(&fs))
    }

    fn apply_forcing(&self, f1: &[f64], f2: &[f64], out: &mut [f64]) {
        let n = self.bp.len();
        let (c, s) = self.moments(f1);
        let conv = convolve(Kernel::Exp(self.mu), f2, &Derivs::from_samples(f2, self.h), self.h);
        for i in 0..n {
            out[i] = -(self.sin[i] * c[i] - self.cos[i] * s[i]) / self.tau;
            out[n + i] = conv[i] / (2.0 * self.mu);
        }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let (f1, f2) = self.forcing(u);
        self.apply_forcing(&f1, &f2, out);
    }
}

/// `max((1/2τ), (1/2μ)) ∫ (|b⁺| + |b⁻|)`, a bound on the sup-norm of the operator.
fn operator_bound(bp: &[f64], bm: &[f64], tau: f64, mu: f64, h: f64) -> f64 {
    let abs: Vec<f64> = bp.iter().zip(bm).map(|(a, b)| a.abs() + b.abs()).collect();
    let mass = trapezoid(&abs, h);
    mass * (0.5 / tau).max(0.5 / mu)
}

pub fn solve_g_pair(mode: &InternalMode) -> Result<FgrPair> {
    solve_g_pair_with(&mode.profile, &mode.potentials, mode.lambda)
}

/// The pair for given profile, potentials and eigenvalue. With the zero model
/// and `λ = 1` this reduces to `h = -cos y`.
pub fn solve_g_pair_with(profile: &SolitonProfile, pot: &Potentials, lambda: f64) -> Result<FgrPair> {
    if !(lambda > 0.5) {
        return Err(Error::NoOscillation { lambda });
    }
    let tau = (2.0 * lambda - 1.0).sqrt();
    let mu = (2.0 + tau * tau).sqrt();
    let grid = profile.grid;
    let h = grid.h();
    let n = grid.len();
    let ys = grid.nodes();
    let bound = operator_bound(&pot.b_plus, &pot.b_minus, tau, mu, h);
    if bound >= 1.0 {
        return Err(Error::OperatorTooLarge { norm: bound });
    }
    let op = Upsilon {
        bp: &pot.b_plus,
        bm: &pot.b_minus,
        cos: ys.iter().map(|y| (tau * y).cos()).collect(),
        sin: ys.iter().map(|y| (tau * y).sin()).collect(),
        tau,
        mu,
        h,
        center: grid.center(),
    };

    // f̌ = Υ̌(-cos, 0)
    let mut seed = vec![0.0; 2 * n];
    for i in 0..n {
        seed[i] = -op.cos[i];
    }
    let mut rhs = vec![0.0; 2 * n];
    op.apply(&seed, &mut rhs);
    let (ell, iterations) = if rhs.iter().all(|&v| v == 0.0) {
        (vec![0.0; 2 * n], 0)
    } else {
        let out = gmres(
            |v, o| {
                op.apply(v, o);
                for i in 0..v.len() {
                    o[i] = v[i] - o[i];
                }
            },
            &rhs,
            None,
            GmresOptions { rel_tol: 1e-14, ..Default::default() },
        );
        if !out.converged && out.rel_residual > 1e-10 {
            return Err(Error::IllConditioned { residual: out.rel_residual });
        }
        (out.x, out.iterations)
    };

    // derivatives of ℓ̌ from the full forcing F = F(ℓ̌ - (cos, 0))
    let mut shifted = ell.clone();
    for i in 0..n {
        shifted[i] -= op.cos[i];
    }
    let (f1, f2) = op.forcing(&shifted);
    let (c, s) = op.moments(&f1);
    let dl2 = convolve(Kernel::SignExp(mu), &f2, &Derivs::from_samples(&f2, h), h);

    let model = &profile.model;
    let w = if model.is_zero() { 1.0 } else { profile.omega };
    let mut h1 = vec![0.0; n];
    let mut h2 = vec![0.0; n];
    let mut g1_jets = Vec::with_capacity(n);
    let mut g2_jets = Vec::with_capacity(n);
    for i in 0..n {
        let (l1, l2) = (ell[i], ell[n + i]);
        let dl1 = -(op.cos[i] * c[i] + op.sin[i] * s[i]);
        let dl2 = -0.5 * dl2[i];
        let base = -op.cos[i];
        let dbase = tau * op.sin[i];
        let q = profile.jet(i);
        let (ap, am) = potential_jets(model, w, &q);
        let (j1, j2) = second_order_pair(
            [base + l1 + l2, base + l1 - l2],
            [dbase + dl1 + dl2, dbase + dl1 - dl2],
            |a, b| ((ap + 1.0) * *a - *b * (2.0 * lambda), (am + 1.0) * *b - *a * (2.0 * lambda)),
        );
        h1[i] = j1.value();
        h2[i] = j2.value();
        let g1 = s_star_squared(&j1, &q, model, w);
        let up = l_plus_potential_jet(model, w, &q);
        let g2 = (-(g1.diff().diff()) + up * g1) * (0.5 / lambda);
        g1_jets.push(g1);
        g2_jets.push(g2);
    }
    let g1 = g1_jets.iter().map(Jet::value).collect();
    let g2 = g2_jets.iter().map(Jet::value).collect();
    Ok(FgrPair { lambda, tau, h1, h2, g1, g2, g1_jets, g2_jets, operator_bound: bound, gmres_iterations: iterations })
}

/// The four orthogonality residuals `⟨g₁,Q⟩`, `⟨g₂,ΛQ⟩`, `⟨g₁,V₂⟩`, `⟨g₂,V₁⟩`,
/// each divided by the product of the grid norms of its two factors.
#[derive(Clone, Copy, Debug)]
pub struct Orthogonality {
    pub g1_q: f64,
    pub g2_lambda_q: f64,
    pub g1_v2: f64,
    pub g2_v1: f64,
}

impl Orthogonality {
    pub fn max(&self) -> f64 {
        self.g1_q.abs().max(self.g2_lambda_q.abs()).max(self.g1_v2.abs()).max(self.g2_v1.abs())
    }
}

pub fn orthogonality(mode: &InternalMode, pair: &FgrPair, lambda_q: &[f64]) -> Orthogonality {
    let h = mode.grid.h();
    let q = &mode.profile.q;
    let rel = |f: &[f64], tf: Option<Tail>, g: &[f64], tg: Option<Tail>| {
        line_inner(f, tf, g, tg, h) / (grid_norm(f, h) * grid_norm(g, h))
    };
    Orthogonality {
        g1_q: rel(&pair.g1, None, q, None),
        g2_lambda_q: rel(&pair.g2, None, lambda_q, None),
        g1_v2: rel(&pair.g1, Some(pair.g1_tail()), &mode.v2, Some(mode.v2_tail())),
        g2_v1: rel(&pair.g2, Some(pair.g2_tail()), &mode.v1, Some(mode.v1_tail())),
    }
}
