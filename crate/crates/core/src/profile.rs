//! Rescaled solitary-wave profile `Q_ω`, solution of
//! `Q'' = Q - Q^3 - g(ω Q^2)/ω · Q`, even, positive and decaying.

use std::f64::consts::SQRT_2;

pub use crate::grid::Grid;
use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearityModel;
use crate::numerics::brent;
use crate::numerics::jet::{second_order_scalar, Jet};

#[derive(Clone, Debug)]
pub struct SolitonProfile {
    pub omega: f64,
    pub q0: f64,
    pub grid: Grid,
    pub q: Vec<f64>,
    pub qp: Vec<f64>,
    pub qpp: Vec<f64>,
    pub model: NonlinearityModel,
}

/// `1 - q^2/2 - G(ω q^2)/(ω^2 q^2)`, which equals `(Q'/Q)^2` along the profile.
fn slope_sq(model: &NonlinearityModel, omega: f64, q: f64) -> f64 {
    let s = omega * q * q;
    1.0 - 0.5 * q * q - model.antiderivative_over_s(s) / omega
}

fn accel(model: &NonlinearityModel, omega: f64, q: f64) -> f64 {
    let s = omega * q * q;
    q - q * q * q - model.power_sum(s, 0.0, |a, _| a) / omega * q
}

/// Right-hand side of the profile ODE as a jet map.
pub fn profile_rhs_jet(model: &NonlinearityModel, omega: f64, q: &Jet) -> Jet {
    let q2 = *q * *q;
    let g = model.power_sum_jet(&(q2 * omega), 0.0, |a, _| a);
    *q - q2 * *q - g * *q * (1.0 / omega)
}

/// The cubic soliton `√2 sech y` in closed form.
pub fn base_profile(grid: Grid) -> SolitonProfile {
    let ys = grid.nodes();
    let q: Vec<f64> = ys.iter().map(|y| SQRT_2 / y.cosh()).collect();
    let qp: Vec<f64> = ys.iter().map(|y| -SQRT_2 * y.tanh() / y.cosh()).collect();
    let qpp: Vec<f64> = q.iter().map(|q| q - q * q * q).collect();
    SolitonProfile { omega: 0.0, q0: SQRT_2, grid, q, qp, qpp, model: NonlinearityModel::Zero }
}

/// Root of the peak equation, preferring `(1, √2]`.
pub fn peak_value(model: &NonlinearityModel, omega: f64) -> Result<f64> {
    if model.is_zero() {
        return Ok(SQRT_2);
    }
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("omega = {omega} must be positive")));
    }
    let f = |q: f64| slope_sq(model, omega, q);
    for (lo, hi) in [(1.0, SQRT_2), (SQRT_2, SQRT_2 + 0.5), (1.0, SQRT_2 + 0.5)] {
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            return Ok(lo);
        }
        if flo * fhi <= 0.0 {
            if let Some(r) = brent(lo, hi, 1e-15, f) {
                return Ok(r);
            }
        }
    }
    Err(Error::NoPeakRoot { omega })
}

fn rk4<const N: usize>(y: [f64; N], h: f64, f: &impl Fn(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let add = |a: &[f64; N], b: &[f64; N], s: f64| {
        let mut o = *a;
        for i in 0..N {
            o[i] += s * b[i];
        }
        o
    };
    let k1 = f(&y);
    let k2 = f(&add(&y, &k1, 0.5 * h));
    let k3 = f(&add(&y, &k2, 0.5 * h));
    let k4 = f(&add(&y, &k3, h));
    let mut o = y;
    for i in 0..N {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Integrate the profile on `grid`.
pub fn solve_profile(model: &NonlinearityModel, omega: f64, grid: Grid) -> Result<SolitonProfile> {
    let q0 = peak_value(model, omega)?;
    let n = grid.n;
    let h = grid.h();
    let sub = 4;
    let dt = h / sub as f64;
    let mut qh = vec![0.0; n + 1];
    let mut ph = vec![0.0; n + 1];
    qh[0] = q0;

    // ω only enters through g(ωQ²)/ω, so the zero model uses ω = 1 harmlessly
    let w = if model.is_zero() { 1.0 } else { omega };
    let second = |u: &[f64; 2]| [u[1], accel(model, w, u[0])];
    let mut state = [q0, 0.0];
    let mut j = 0;
    while j < n && state[0] >= 0.5 * q0 {
        for _ in 0..sub {
            state = rk4(state, dt, &second);
        }
        j += 1;
        if !state[0].is_finite() || state[0] <= 0.0 || state[1] >= 0.0 {
            return Err(Error::ProfileInstability { y: j as f64 * h });
        }
        qh[j] = state[0];
        ph[j] = state[1];
    }

    // first-order reduction in log Q: (ln Q)' = -sqrt(slope_sq)
    let log_rhs = |v: &[f64; 1]| {
        let q = v[0].exp();
        [-slope_sq(model, w, q).max(0.0).sqrt()]
    };
    let mut v = [state[0].ln()];
    while j < n {
        for _ in 0..sub {
            v = rk4(v, dt, &log_rhs);
        }
        j += 1;
        let q = v[0].exp();
        let s2 = slope_sq(model, w, q);
        if !q.is_finite() || s2 <= 0.0 {
            return Err(Error::ProfileInstability { y: j as f64 * h });
        }
        qh[j] = q;
        ph[j] = -q * s2.sqrt();
    }

    let len = grid.len();
    let c = grid.center();
    let mut q = vec![0.0; len];
    let mut qp = vec![0.0; len];
    for k in 0..=n {
        q[c + k] = qh[k];
        q[c - k] = qh[k];
        qp[c + k] = ph[k];
        qp[c - k] = -ph[k];
    }
    let qpp = q.iter().map(|&x| accel(model, w, x)).collect();
    Ok(SolitonProfile { omega, q0, grid, q, qp, qpp, model: model.clone() })
}

impl SolitonProfile {
    fn effective_omega(&self) -> f64 {
        if self.model.is_zero() {
            1.0
        } else {
            self.omega
        }
    }

    /// Taylor jet of `Q` at node `i`.
    pub fn jet(&self, i: usize) -> Jet {
        let w = self.effective_omega();
        second_order_scalar(self.q[i], self.qp[i], |u| profile_rhs_jet(&self.model, w, u))
    }

    pub fn jets(&self) -> Vec<Jet> {
        (0..self.grid.len()).map(|i| self.jet(i)).collect()
    }

    /// Pointwise residual of `(Q')^2 = Q^2 - Q^4/2 - G(ωQ^2)/ω^2`.
    pub fn first_integral_residual(&self) -> Vec<f64> {
        let w = self.effective_omega();
        self.q
            .iter()
            .zip(&self.qp)
            .map(|(&q, &p)| {
                let s = w * q * q;
                p * p - q * q + 0.5 * q.powi(4) + q * q * self.model.antiderivative_over_s(s) / w
            })
            .collect()
    }
}

/// Central difference `∂_ω Q_ω` with relative step `delta`.
pub fn profile_omega_derivative(model: &NonlinearityModel, omega: f64, grid: Grid, delta: f64) -> Result<Vec<f64>> {
    if model.is_zero() {
        return Ok(vec![0.0; grid.len()]);
    }
    let plus = solve_profile(model, omega * (1.0 + delta), grid)?;
    let minus = solve_profile(model, omega * (1.0 - delta), grid)?;
    let d = 2.0 * delta * omega;
    Ok(plus.q.iter().zip(&minus.q).map(|(a, b)| (a - b) / d).collect())
}

/// `Λ_ω Q_ω = ½(Q + y Q') + ω ∂_ω Q`.
pub fn lambda_omega_q(profile: &SolitonProfile, dq_domega: &[f64]) -> Vec<f64> {
    let ys = profile.grid.nodes();
    (0..ys.len())
        .map(|i| 0.5 * (profile.q[i] + ys[i] * profile.qp[i]) + profile.omega * dq_domega[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_for_square_nonlinearity() {
        let m = NonlinearityModel::power(1.0, 2.0).unwrap();
        let w = 0.01;
        let q2 = (-0.5 + (0.25 + 4.0 * w / 3.0f64).sqrt()) / (2.0 * w / 3.0);
        let q0 = peak_value(&m, w).unwrap();
        assert!((q0 - q2.sqrt()).abs() < 1e-14);
        assert!((q0 - 1.40500).abs() < 5e-6);
        assert!(slope_sq(&m, w, q0).abs() <= 1e-14);
    }

    #[test]
    fn peak_tends_to_sqrt2() {
        let m = NonlinearityModel::power(1.0, 2.0).unwrap();
        let d: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&w| (SQRT_2 - peak_value(&m, w).unwrap()).abs()).collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] < 1e-4);
    }

    #[test]
    fn defocusing_correction_moves_peak_up() {
        let m = NonlinearityModel::power(-1.0, 2.0).unwrap();
        let q0 = peak_value(&m, 0.01).unwrap();
        assert!(q0 > SQRT_2 && q0 < SQRT_2 + 0.5);
    }

    #[test]
    fn peak_fails_when_omega_too_large() {
        let m = NonlinearityModel::power(-1.0, 2.0).unwrap();
        assert!(matches!(peak_value(&m, 5.0), Err(Error::NoPeakRoot { .. })));
    }

    #[test]
    fn base_profile_closed_form() {
        let p = base_profile(Grid::new(20.0, 400));
        assert_eq!(p.q[p.grid.center()], SQRT_2);
        for r in p.first_integral_residual() {
            assert!(r.abs() < 1e-15);
        }
    }

    #[test]
    fn zero_model_solver_matches_sech() {
        let grid = Grid::new(40.0, 4096);
        let p = solve_profile(&NonlinearityModel::Zero, 0.01, grid).unwrap();
        let b = base_profile(grid);
        let e = p.q.iter().zip(&b.q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(e < 1e-8, "{e}");
    }

    #[test]
    fn jets_reproduce_neighbours() {
        let m = NonlinearityModel::power(1.0, 1.5).unwrap();
        let grid = Grid::new(40.0, 4096);
        let p = solve_profile(&m, 0.01, grid).unwrap();
        let h = grid.h();
        for i in [4100usize, 4300, 5000] {
            let j = p.jet(i);
            assert!((j.eval(h) - p.q[i + 1]).abs() < 1e-11 * p.q[i]);
            assert!((j.derivative(2) - p.qpp[i]).abs() < 1e-13);
        }
    }
}
