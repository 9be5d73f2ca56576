//! The perturbation `g(s)` of the cubic nonlinearity and scalar quantities
//! derived from it alone.
//!
//! Every supported model is a finite sum `Σ a_i s^{σ_i}` with `σ_i > 1`, so all
//! derived functions are again power sums and are evaluated term by term.

use crate::error::{Error, Result};
use crate::numerics::jet::Jet;
use crate::profile::SolitonProfile;

#[derive(Clone, Debug, PartialEq)]
pub enum NonlinearityModel {
    Zero,
    Power { a: f64, sigma: f64 },
    Polynomial(Vec<(f64, f64)>),
}

/// `σ (σ-1) ... (σ-k+1)`
fn falling(sigma: f64, k: usize) -> f64 {
    (0..k).map(|j| sigma - j as f64).product()
}

impl NonlinearityModel {
    pub fn power(a: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 1.0) || !sigma.is_finite() {
            return Err(Error::InvalidModel(format!("exponent {sigma} must exceed 1")));
        }
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidModel("coefficient must be finite and nonzero".into()));
        }
        Ok(Self::Power { a, sigma })
    }

    pub fn polynomial(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidModel("polynomial needs at least one term".into()));
        }
        if !(terms[0].1 > 1.0) {
            return Err(Error::InvalidModel("lowest exponent must exceed 1".into()));
        }
        if terms[0].0 <= 0.0 {
            return Err(Error::InvalidModel("leading coefficient must be positive".into()));
        }
        if terms.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(Error::InvalidModel("exponents must be strictly increasing".into()));
        }
        if terms.iter().any(|(a, s)| !a.is_finite() || !s.is_finite()) {
            return Err(Error::InvalidModel("non-finite term".into()));
        }
        Ok(Self::Polynomial(terms))
    }

    /// `(a_i, σ_i)` pairs; empty for the zero model.
    pub fn terms(&self) -> Vec<(f64, f64)> {
        match self {
            Self::Zero => vec![],
            Self::Power { a, sigma } => vec![(*a, *sigma)],
            Self::Polynomial(t) => t.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    /// `Σ coef(a, σ) s^{σ + shift}`
    pub fn power_sum(&self, s: f64, shift: f64, coef: impl Fn(f64, f64) -> f64) -> f64 {
        self.terms()
            .iter()
            .map(|&(a, sig)| {
                let c = coef(a, sig);
                if c == 0.0 {
                    0.0
                } else {
                    c * s.powf(sig + shift)
                }
            })
            .sum()
    }

    /// Jet version of [`Self::power_sum`].
    pub fn power_sum_jet(&self, s: &Jet, shift: f64, coef: impl Fn(f64, f64) -> f64) -> Jet {
        let mut out = Jet::default();
        for (a, sig) in self.terms() {
            let c = coef(a, sig);
            if c != 0.0 {
                out += s.powf(sig + shift) * c;
            }
        }
        out
    }

    /// `g^(k)(s)` for `k <= 5`.
    pub fn eval_g(&self, s: f64, k: usize) -> Result<f64> {
        if k > 5 {
            return Err(Error::UnsupportedOrder(k));
        }
        if s < 0.0 || s.is_nan() {
            return Err(Error::Domain(format!("s = {s} must be nonnegative")));
        }
        let mut total = 0.0;
        for (a, sig) in self.terms() {
            let c = a * falling(sig, k);
            if c == 0.0 {
                continue;
            }
            let p = sig - k as f64;
            total += if s == 0.0 {
                if p > 0.0 {
                    0.0
                } else if p == 0.0 {
                    c
                } else {
                    c.signum() * f64::INFINITY
                }
            } else {
                c * s.powf(p)
            };
        }
        Ok(total)
    }

    /// `G(s) = ∫_0^s g`.
    pub fn antiderivative(&self, s: f64) -> f64 {
        self.power_sum(s, 1.0, |a, sig| a / (sig + 1.0))
    }

    /// `G(s) / s`, finite at `s = 0`.
    pub fn antiderivative_over_s(&self, s: f64) -> f64 {
        self.power_sum(s, 0.0, |a, sig| a / (sig + 1.0))
    }

    /// `B(s) = -3 g + s g' + 4 G / s`.
    pub fn eval_b(&self, s: f64) -> Result<f64> {
        if s < 0.0 || s.is_nan() {
            return Err(Error::Domain(format!("s = {s} must be nonnegative")));
        }
        Ok(self.power_sum(s, 0.0, |a, sig| a * (sig - 1.0).powi(2) / (sig + 1.0)))
    }

    /// `sup_{0 <= s <= 3ω} |s^{k-1} g^(k)(s)|` maximized over `k = 0..=4`.
    pub fn epsilon(&self, omega: f64) -> f64 {
        let terms = self.terms();
        if terms.is_empty() {
            return 0.0;
        }
        let smax = 3.0 * omega;
        if terms.len() == 1 {
            // s^{σ-1} is monotone, the sup sits at the right end
            let (a, sig) = terms[0];
            return (0..=4)
                .map(|k| (a * falling(sig, k)).abs() * smax.powf(sig - 1.0))
                .fold(0.0, f64::max);
        }
        let branch = |k: usize, s: f64| -> f64 {
            terms.iter().map(|&(a, sig)| a * falling(sig, k) * s.powf(sig - 1.0)).sum::<f64>().abs()
        };
        let mut best = 0.0f64;
        for k in 0..=4 {
            let samples = 512;
            let ds = smax / samples as f64;
            let mut arg = 0;
            let mut top = branch(k, smax);
            for i in 0..samples {
                let v = branch(k, i as f64 * ds);
                if v > top {
                    top = v;
                    arg = i;
                }
            }
            if arg > 0 {
                // golden-section refinement around the sampled maximum
                let (mut lo, mut hi) = ((arg as f64 - 1.0) * ds, ((arg + 1) as f64 * ds).min(smax));
                let r = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..80 {
                    let m1 = hi - r * (hi - lo);
                    let m2 = lo + r * (hi - lo);
                    if branch(k, m1) > branch(k, m2) {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                top = top.max(branch(k, 0.5 * (lo + hi)));
            }
            best = best.max(top);
        }
        best
    }

    /// Hypothesis-(H2) ratio in rescaled variables, `(1/(ω ε²)) ∫ B(ω Q²) dy`,
    /// which equals `I_ω / (2 ε_ω²)`.
    pub fn h2_ratio(&self, profile: &SolitonProfile) -> f64 {
        let eps = self.epsilon(profile.omega);
        if eps == 0.0 {
            return 0.0;
        }
        let w = profile.omega;
        let vals: Vec<f64> = profile
            .q
            .iter()
            .map(|q| self.power_sum(w * q * q, 0.0, |a, sig| a * (sig - 1.0).powi(2) / (sig + 1.0)))
            .collect();
        crate::numerics::quad::trapezoid(&vals, profile.grid.h()) / (w * eps * eps)
    }
}
