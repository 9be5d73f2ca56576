//! Leading-order constant `Γ₀(σ)` for `g(s) = s^σ` near the cubic soliton
//! `Q = √2 sech y`.

use std::f64::consts::SQRT_2;

use crate::grid::Grid;
use crate::numerics::quad::{convolve_direct, cumulative_gauss, trapezoid, Derivs, Kernel};

#[derive(Clone, Debug)]
pub struct Gamma0Result {
    pub sigma: f64,
    pub gamma0: f64,
    /// `|Γ₀(grid) − Γ₀(grid with twice the spacing)|`.
    pub error_estimate: f64,
    pub grid: Grid,
    pub a: Vec<f64>,
    pub d0: Vec<f64>,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub delta2: Vec<f64>,
    pub delta4: Vec<f64>,
    pub delta5: Vec<f64>,
}

/// The closed form `32π√2 / (3 cosh(π/2))`.
pub fn gamma0_two_exact() -> f64 {
    32.0 * std::f64::consts::PI * SQRT_2 / (3.0 * (std::f64::consts::FRAC_PI_2).cosh())
}

/// `2π√2 / cosh(π/2)`, the slope of `Γ₀` at `σ = 1`.
pub fn gamma0_slope_at_one() -> f64 {
    2.0 * std::f64::consts::PI * SQRT_2 / (std::f64::consts::FRAC_PI_2).cosh()
}

fn sech(y: f64) -> f64 {
    1.0 / y.cosh()
}

pub fn q(y: f64) -> f64 {
    SQRT_2 * sech(y)
}

pub fn qp(y: f64) -> f64 {
    -SQRT_2 * y.tanh() * sech(y)
}

/// Even solution of `L₊⁰A = 0` with `Q''A − Q'A' = 1`.
pub fn a_fn(y: f64) -> f64 {
    let (s, t) = (sech(y), y.tanh());
    SQRT_2 / 4.0 * (3.0 * y * t * s + y.sinh() * t - 2.0 * s)
}

pub fn a_prime(y: f64) -> f64 {
    let (s, t) = (sech(y), y.tanh());
    let b = 3.0 * y * t * s + y.sinh() * t - 2.0 * s;
    SQRT_2 / 4.0 * (-t * b + 3.0 * t * s + 3.0 * y * s * s * s + 2.0 * y.sinh())
}

/// `Q^{2σ}` and its first three derivatives.
fn density(y: f64, sigma: f64) -> [f64; 4] {
    let p = 2.0 * sigma;
    let (s, t) = (sech(y), y.tanh());
    let base = 2f64.powf(sigma) * s.powf(p);
    let s2 = s * s;
    [
        base,
        -p * base * t,
        p * base * (p * t * t - s2),
        p * base * t * (-p * p * t * t + (3.0 * p + 2.0) * s2),
    ]
}

/// Evaluate `Γ₀(σ)` on `grid` only.
fn evaluate(sigma: f64, grid: Grid) -> Gamma0Result {
    let ys = grid.nodes();
    let n = ys.len();
    let h = grid.h();
    let qs: Vec<f64> = ys.iter().map(|&y| q(y)).collect();
    let qps: Vec<f64> = ys.iter().map(|&y| qp(y)).collect();
    let a: Vec<f64> = ys.iter().map(|&y| a_fn(y)).collect();

    // D⁰ and its derivative -Q''C + A'Q^{2σ+2}/(2σ+2), C = ∫₀^y A Q^{2σ+1}
    let c = cumulative_gauss(|y| a_fn(y) * q(y).powf(2.0 * sigma + 1.0), &ys, grid.center(), 8);
    let mut d0 = vec![0.0; n];
    let mut d0p = vec![0.0; n];
    for i in 0..n {
        let (y, qv) = (ys[i], qs[i]);
        let top = qv.powf(2.0 * sigma + 2.0) / (2.0 * sigma + 2.0);
        d0[i] = -qps[i] * c[i] + a[i] * top;
        let qpp = qv - qv * qv * qv;
        d0p[i] = -qpp * c[i] + a_prime(y) * top;
    }

    let dens: Vec<[f64; 4]> = ys.iter().map(|&y| density(y, sigma)).collect();
    let rho: Vec<f64> = dens.iter().map(|d| d[0]).collect();
    let derivs = Derivs {
        d1: dens.iter().map(|d| d[1]).collect(),
        d2: dens.iter().map(|d| d[2]).collect(),
        d3: dens.iter().map(|d| d[3]).collect(),
    };
    let k1 = -(sigma - 1.0).powi(2) / (2.0 * (sigma + 1.0));
    let k2 = -SQRT_2 * sigma * (sigma - 1.0) / (4.0 * (sigma + 1.0));
    let (t1, t1p, t2, t2p) = if k1 == 0.0 && k2 == 0.0 {
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n])
    } else {
        let scale = |v: Vec<f64>, c: f64| v.into_iter().map(|x| c * x).collect::<Vec<f64>>();
        (
            scale(convolve_direct(Kernel::Abs, &rho, &derivs, h), k1),
            scale(convolve_direct(Kernel::SignExp(0.0), &rho, &derivs, h), k1),
            scale(convolve_direct(Kernel::Exp(SQRT_2), &rho, &derivs, h), k2),
            scale(convolve_direct(Kernel::SignExp(SQRT_2), &rho, &derivs, h), -SQRT_2 * k2),
        )
    };

    let sp1 = sigma + 1.0;
    let mut delta4 = vec![0.0; n];
    let mut delta5 = vec![0.0; n];
    let mut integrand = vec![0.0; n];
    for i in 0..n {
        let (y, qv, qpv) = (ys[i], qs[i], qps[i]);
        let q2 = qv * qv;
        let pw = |k: f64| qv.powf(2.0 * sigma + k);
        delta4[i] = (13.0 * q2 - 16.0) * q2 * d0[i] - 8.0 * qpv * qv * d0p[i]
            + 2.0 * qv * (3.0 * (1.0 - q2).powi(2) - 1.0) * t1[i]
            + 6.0 * qv * (2.0 - q2).powi(2) * t2[i]
            + 4.0 * (2.0 - 3.0 * q2) * qpv * t1p[i]
            + 4.0 * (4.0 - 3.0 * q2) * qpv * t2p[i]
            + 2.0 * sigma * sigma * pw(-1.0)
            - (4.0 * (sigma + 2.0) / sp1 + (2.0 * sigma + 1.0).powi(2)) * pw(1.0)
            + (8.0 / sp1 + sp1 * (2.0 * sigma + 1.0)) * pw(3.0);
        delta5[i] = (2.0 - 30.0 * q2 + 29.0 * q2 * q2 - 8.0 * q2 * q2 * q2) * d0[i] - 8.0 * q2 * qv * qpv * d0p[i]
            + 2.0 * qv * (2.0 - q2) * (2.0 - 3.0 * q2) * t1[i]
            + 2.0 * qv * (3.0 * q2 * q2 - 10.0 * q2 + 12.0) * t2[i]
            + 16.0 * (1.0 - q2) * qpv * t1p[i]
            + 8.0 * (2.0 - q2) * qpv * t2p[i]
            + 2.0 * sigma * sp1 * pw(-1.0)
            - (16.0 / sp1 + 2.0 * sigma + (2.0 * sigma + 1.0).powi(2)) * pw(1.0)
            + (4.0 * (4.0 - sigma) / sp1 + sp1 * (2.0 * sigma + 1.0)) * pw(3.0)
            - 4.0 / sp1 * pw(5.0);
        // 2Q'/Q = -2 tanh y
        integrand[i] = q2 * delta4[i] * y.cos() - 2.0 * y.tanh() * delta5[i] * y.sin();
    }
    let delta2 = delta4.iter().zip(&delta5).map(|(d4, d5)| 0.5 * (d5 - d4)).collect();
    Gamma0Result {
        sigma,
        gamma0: trapezoid(&integrand, h),
        error_estimate: f64::NAN,
        grid,
        a,
        d0,
        t1,
        t2,
        delta2,
        delta4,
        delta5,
    }
}

/// `Γ₀(σ)` with an error estimate from the same computation at twice the
/// spacing.
pub fn gamma0(sigma: f64, grid: Grid) -> Gamma0Result {
    let mut fine = evaluate(sigma, grid);
    let coarse = evaluate(sigma, Grid::new(grid.half_length, grid.n / 2));
    fine.error_estimate = (fine.gamma0 - coarse.gamma0).abs();
    fine
}

/// `Γ₀` on `count` uniform points of `[from, to]`, optionally spread over
/// `jobs` threads. Results come back in σ order.
pub fn gamma0_scan(from: f64, to: f64, count: usize, grid: Grid, jobs: usize) -> Vec<Gamma0Result> {
    let sigmas: Vec<f64> = match count {
        0 => vec![],
        1 => vec![from],
        _ => (0..count).map(|k| from + (to - from) * k as f64 / (count - 1) as f64).collect(),
    };
    let jobs = jobs.clamp(1, sigmas.len().max(1));
    if jobs == 1 {
        return sigmas.iter().map(|&s| gamma0(s, grid)).collect();
    }
    let mut slots: Vec<Option<Gamma0Result>> = vec![None; sigmas.len()];
    std::thread::scope(|scope| {
        for (chunk_idx, chunk) in slots.chunks_mut(sigmas.len().div_ceil(jobs)).enumerate() {
            let start = chunk_idx * sigmas.len().div_ceil(jobs);
            let sigmas = &sigmas;
            scope.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(gamma0(sigmas[start + k], grid));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}
