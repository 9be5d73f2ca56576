//! Moments of the cubic soliton behind the expansion of `Γ₀` at `σ = 1`.
//!
//! `p_k = ∫Q^k cos y`, `q_k = ∫Q^k ln Q cos y`, `r_k = ∫t₂Q^k cos y`,
//! `s_k = ∫t₂Q'Q^{k-1} sin y`, `m_k = ∫yQ^k sin y`, with
//! `t₂ = -(√2/8)∫e^{-√2|y-z|}Q²(z)dz`.

use std::f64::consts::SQRT_2;

use super::gamma0::{q, qp};
use crate::grid::Grid;
use crate::numerics::quad::{convolve, trapezoid, Derivs, Kernel};

/// Odd orders 1, 3, 5, 7.
pub const ORDERS: [usize; 4] = [1, 3, 5, 7];

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub p: [f64; 4],
    pub q: [f64; 4],
    pub r: [f64; 4],
    pub s: [f64; 4],
    pub m: [f64; 4],
    pub t2: Vec<f64>,
}

/// Residuals of the five recurrences for `k = 1, 3, 5`.
#[derive(Clone, Debug)]
pub struct RecurrenceResiduals {
    pub p: [f64; 3],
    pub q: [f64; 3],
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub m: [f64; 3],
    /// `-6p₁ + 14/3 p₃ − 18/5 p₅ + 3/2 p₇`.
    pub combination: f64,
}

impl RecurrenceResiduals {
    pub fn max_abs(&self) -> f64 {
        [self.p, self.q, self.r, self.s, self.m].iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub fn moment_table(grid: Grid) -> MomentTable {
    let ys = grid.nodes();
    let h = grid.h();
    let qs: Vec<f64> = ys.iter().map(|&y| q(y)).collect();
    let qps: Vec<f64> = ys.iter().map(|&y| qp(y)).collect();
    // Q² = 2 sech², with exact derivatives for the kink correction
    let q2: Vec<f64> = qs.iter().map(|v| v * v).collect();
    let d = Derivs {
        d1: ys.iter().map(|&y| -2.0 * y.tanh() * q(y) * q(y)).collect(),
        d2: ys.iter().map(|&y| 2.0 * q(y) * q(y) * (2.0 * y.tanh().powi(2) - 1.0 / y.cosh().powi(2))).collect(),
        d3: vec![0.0; ys.len()],
    };
    let t2: Vec<f64> = convolve(Kernel::Exp(SQRT_2), &q2, &d, h).into_iter().map(|v| -SQRT_2 / 8.0 * v).collect();

    let integrate = |f: &dyn Fn(usize) -> f64| {
        let v: Vec<f64> = (0..ys.len()).map(f).collect();
        trapezoid(&v, h)
    };
    let mut t = MomentTable { p: [0.0; 4], q: [0.0; 4], r: [0.0; 4], s: [0.0; 4], m: [0.0; 4], t2: Vec::new() };
    for (j, &k) in ORDERS.iter().enumerate() {
        let k = k as i32;
        t.p[j] = integrate(&|i| qs[i].powi(k) * ys[i].cos());
        t.q[j] = integrate(&|i| qs[i].powi(k) * qs[i].ln() * ys[i].cos());
        t.r[j] = integrate(&|i| t2[i] * qs[i].powi(k) * ys[i].cos());
        t.s[j] = integrate(&|i| t2[i] * qps[i] * qs[i].powi(k - 1) * ys[i].sin());
        t.m[j] = integrate(&|i| ys[i] * qs[i].powi(k) * ys[i].sin());
    }
    t.t2 = t2;
    t
}

pub fn recurrence_residuals(t: &MomentTable) -> RecurrenceResiduals {
    let mut out = RecurrenceResiduals { p: [0.0; 3], q: [0.0; 3], r: [0.0; 3], s: [0.0; 3], m: [0.0; 3], combination: 0.0 };
    for j in 0..3 {
        let k = ORDERS[j] as f64;
        let c = 2.0 * (k * k + 1.0) / (k * (k + 1.0));
        out.p[j] = t.p[j + 1] - c * t.p[j];
        out.q[j] = t.q[j + 1] - c * t.q[j] - 2.0 * (k * k - 2.0 * k - 1.0) / (k * k * (k + 1.0).powi(2)) * t.p[j];
        out.r[j] = t.r[j + 1] - 2.0 / (k * (k + 1.0)) * ((k * k - 3.0) * t.r[j] - 2.0 * k * t.s[j] - 0.5 * t.p[j + 1]);
        out.s[j] = t.s[j + 1]
            - 2.0 / ((k + 1.0) * (k + 2.0))
                * ((k * k - 3.0) * t.s[j] + 2.0 * k * t.r[j] - (k + 1.0) * t.r[j + 1] + t.p[j + 1] / (2.0 * (k + 2.0)));
        out.m[j] = t.m[j + 1] - 2.0 / (k * (k + 1.0)) * ((k * k + 1.0) * t.m[j] - 2.0 * t.p[j]);
    }
    out.combination = -6.0 * t.p[0] + 14.0 / 3.0 * t.p[1] - 18.0 / 5.0 * t.p[2] + 1.5 * t.p[3];
    out
}

/// `Γ₀'(1)` assembled from the two moment expansions of the σ-derivative.
pub fn slope_from_moments(t: &MomentTable) -> f64 {
    let [p1, p3, p5, p7] = t.p;
    let [q1, q3, q5, q7] = t.q;
    let [r1, r3, r5, r7] = t.r;
    let [s1, s3, s5, _] = t.s;
    let [m1, m3, m5, m7] = t.m;
    let cos_part = 37.0 / 4.0 * p7 - 17.0 * p5 + 4.0 * p3 + 3.0 * q7 - 6.0 * q5 + 4.0 * q3 + 24.0 * r3 - 24.0 * r5
        + 6.0 * r7
        + 16.0 * (2.0 * r5 - 3.0 * r3 + s3)
        - 12.0 * (3.0 * r7 - 5.0 * r5 + s5)
        + 21.0 * (-p7 / 7.0 + m7 / 7.0)
        - 24.0 * (-p5 / 5.0 + m5 / 5.0);
    let sin_part = -29.0 / 10.0 * p5 + 35.0 / 3.0 * p3 - 13.0 * p1 + 6.0 * (p5 / 25.0 - q5 / 5.0)
        - 16.0 * (p3 / 9.0 - q3 / 3.0)
        + 12.0 * (p1 - q1)
        + 4.0 * m1
        - 62.0 * m3
        + 72.0 * m5
        - 21.0 * m7
        + 12.0 * s5
        - 40.0 * s3
        + 48.0 * s1
        + 32.0 * (-s1 - r1)
        + 32.0 * (3.0 * s3 + r3)
        + 8.0 * (-5.0 * s5 - r5);
    cos_part + sin_part
}
