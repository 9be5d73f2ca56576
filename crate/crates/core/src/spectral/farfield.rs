//! Full-line integrals of even functions that do not decay inside the grid.
//!
//! Beyond `|y| = L` every potential has died out, so the slowly decaying and
//! oscillating functions are exact exponentials there: `f(L + t) = Re(A e^{c t})`.
//! The trapezoid sum is continued analytically through that region.

use num_complex::Complex64;

use crate::numerics::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub amp: Complex64,
    pub rate: Complex64,
}

impl Tail {
    /// `f(L + t) = f(L) e^{-decay t}`.
    pub fn exponential(value_at_end: f64, decay: f64) -> Self {
        Self { amp: Complex64::new(value_at_end, 0.0), rate: Complex64::new(-decay, 0.0) }
    }

    /// `f(L + t) = P cos(τ(L+t)) + R sin(τ(L+t))`, fitted from the value and
    /// slope at the end node.
    pub fn oscillatory(value_at_end: f64, slope_at_end: f64, tau: f64) -> Self {
        Self { amp: Complex64::new(value_at_end, -slope_at_end / tau), rate: Complex64::new(0.0, tau) }
    }

    pub fn oscillatory_from_jet(j: &Jet, tau: f64) -> Self {
        Self::oscillatory(j.value(), j.derivative(1), tau)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.amp * (self.rate * t).exp()).re
    }
}

fn geometric_tail(c: Complex64, h: f64) -> Complex64 {
    // Σ_{j≥1} e^{c j h}
    let q = (c * h).exp();
    q / (Complex64::new(1.0, 0.0) - q)
}

/// `∫_ℝ f g` for even `f`, `g` sampled on the symmetric grid, with optional
/// exponential tails (a missing tail means the function is negligible there).
pub fn line_inner(f: &[f64], tf: Option<Tail>, g: &[f64], tg: Option<Tail>, h: f64) -> f64 {
    let grid_sum: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * h;
    let tail = match (tf, tg) {
        (Some(a), Some(b)) => {
            let s1 = a.amp * b.amp * geometric_tail(a.rate + b.rate, h);
            let s2 = a.amp * b.amp.conj() * geometric_tail(a.rate + b.rate.conj(), h);
            0.5 * (s1.re + s2.re) * h
        }
        _ => 0.0,
    };
    grid_sum + 2.0 * tail
}

/// Grid-restricted L² norm, the quantity used to scale residuals.
pub fn grid_norm(f: &[f64], h: f64) -> f64 {
    (f.iter().map(|v| v * v).sum::<f64>() * h).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_times_oscillation() {
        // ∫ e^{-a|y|} cos(τ y) dy = 2a/(a²+τ²)
        let (a, tau, h, n) = (0.01, 0.9, 0.01, 4000usize);
        let ys: Vec<f64> = (0..=2 * n).map(|i| (i as f64 - n as f64) * h).collect();
        let f: Vec<f64> = ys.iter().map(|y| (-a * y.abs()).exp()).collect();
        let g: Vec<f64> = ys.iter().map(|y| (tau * y).cos()).collect();
        let l = ys[2 * n];
        let tf = Tail::exponential(f[2 * n], a);
        let tg = Tail::oscillatory(g[2 * n], -tau * (tau * l).sin(), tau);
        let v = line_inner(&f, Some(tf), &g, Some(tg), h);
        let exact = 2.0 * a / (a * a + tau * tau);
        // the kink of e^{-a|y|} at 0 leaves an O(a h²) trapezoid error
        assert!((v - exact).abs() < 1e-6, "{v} {exact}");
        let ee = line_inner(&f, Some(tf), &f, Some(tf), h);
        assert!((ee - 1.0 / a).abs() < 1e-5 / a);
    }
}
