//! Truncated Taylor series ("jets") in one variable.
//!
//! A jet stores normalized coefficients `c[k] = f^(k)(y0) / k!` up to a fixed
//! order. Products, powers and quotients follow the usual power-series
//! recurrences, which lets ODE right-hand sides be expanded exactly to the
//! truncation order.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Highest retained Taylor order.
pub const ORDER: usize = 8;
const LEN: usize = ORDER + 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; LEN],
}

impl Default for Jet {
    fn default() -> Self {
        Self { c: [0.0; LEN] }
    }
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut j = Self::default();
        j.c[0] = v;
        j
    }

    /// The identity map `y0 + t` expanded about `y0`.
    pub fn variable(y0: f64) -> Self {
        let mut j = Self::constant(y0);
        j.c[1] = 1.0;
        j
    }

    pub fn from_coeffs(c: [f64; LEN]) -> Self {
        Self { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut f = 1.0;
        for i in 2..=k {
            f *= i as f64;
        }
        self.c[k] * f
    }

    /// Derivative jet; the top coefficient is lost.
    pub fn diff(&self) -> Self {
        let mut out = Self::default();
        for k in 0..ORDER {
            out.c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        out
    }

    /// Evaluate the truncated series at offset `t` from the expansion point.
    pub fn eval(&self, t: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.c.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn recip(&self) -> Self {
        let v0 = self.c[0];
        let mut out = Self::default();
        out.c[0] = 1.0 / v0;
        for k in 1..LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * out.c[k - j];
            }
            out.c[k] = -s / v0;
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        let d0 = other.c[0];
        let mut out = Self::default();
        for k in 0..LEN {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= other.c[j] * out.c[k - j];
            }
            out.c[k] = s / d0;
        }
        out
    }

    /// Real power `self^p`; requires a positive constant term, except that a
    /// vanishing jet maps to zero for `p > 0`.
    pub fn powf(&self, p: f64) -> Self {
        let v0 = self.c[0];
        let mut out = Self::default();
        if v0 == 0.0 {
            return out;
        }
        out.c[0] = v0.powf(p);
        for k in 1..LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += (p * j as f64 - (k - j) as f64) * self.c[j] * out.c[k - j];
            }
            out.c[k] = s / (k as f64 * v0);
        }
        out
    }

    pub fn exp(&self) -> Self {
        let mut out = Self::default();
        out.c[0] = self.c[0].exp();
        for k in 1..LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * out.c[k - j];
            }
            out.c[k] = s / k as f64;
        }
        out
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = Self::default();
        let mut c = Self::default();
        s.c[0] = self.c[0].sin();
        c.c[0] = self.c[0].cos();
        for k in 1..LEN {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                ss += w * c.c[k - j];
                cc -= w * s.c[k - j];
            }
            s.c[k] = ss / k as f64;
            c.c[k] = cc / k as f64;
        }
        (s, c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for k in 0..LEN {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        for k in 0..LEN {
            self.c[k] += rhs.c[k];
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for k in 0..LEN {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::default();
        for i in 0..LEN {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..LEN - i {
                out.c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

/// Expand the solution of `u'' = rhs(u)` about a point where `u = u0`,
/// `u' = u1`. Coefficient `k + 2` only depends on coefficients up to `k`, so
/// the series is filled in order.
pub fn second_order_scalar(u0: f64, u1: f64, rhs: impl Fn(&Jet) -> Jet) -> Jet {
    let mut u = Jet::default();
    u.c[0] = u0;
    u.c[1] = u1;
    for k in 0..ORDER - 1 {
        let f = rhs(&u);
        u.c[k + 2] = f.c[k] / ((k + 1) * (k + 2)) as f64;
    }
    u
}

/// Same as [`second_order_scalar`] for a coupled pair.
pub fn second_order_pair(
    u0: [f64; 2],
    u1: [f64; 2],
    rhs: impl Fn(&Jet, &Jet) -> (Jet, Jet),
) -> (Jet, Jet) {
    let mut a = Jet::default();
    let mut b = Jet::default();
    a.c[0] = u0[0];
    a.c[1] = u1[0];
    b.c[0] = u0[1];
    b.c[1] = u1[1];
    for k in 0..ORDER - 1 {
        let (fa, fb) = rhs(&a, &b);
        let d = ((k + 1) * (k + 2)) as f64;
        a.c[k + 2] = fa.c[k] / d;
        b.c[k + 2] = fb.c[k] / d;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_close(j: &Jet, f: impl Fn(f64) -> f64, y0: f64) {
        for &t in &[-0.02, 0.01, 0.03] {
            let exact = f(y0 + t);
            assert!((j.eval(t) - exact).abs() < 1e-12, "{} vs {}", j.eval(t), exact);
        }
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let y0 = 0.7;
        let y = Jet::variable(y0);
        taylor_close(&y.exp(), f64::exp, y0);
        taylor_close(&y.powf(2.5), |x| x.powf(2.5), y0);
        taylor_close(&y.recip(), |x| 1.0 / x, y0);
        let (s, c) = (y * 3.0).sin_cos();
        taylor_close(&s, |x| (3.0 * x).sin(), y0);
        taylor_close(&c, |x| (3.0 * x).cos(), y0);
        let q = (y * y + 1.0).div(&(y + 2.0));
        taylor_close(&q, |x| (x * x + 1.0) / (x + 2.0), y0);
    }

    #[test]
    fn derivative_shift() {
        let y = Jet::variable(0.3);
        let e = (y * y).exp();
        let d = e.diff();
        let exact = 2.0 * 0.3 * (0.09f64).exp();
        assert!((d.value() - exact).abs() < 1e-14);
        assert!((e.derivative(1) - exact).abs() < 1e-14);
    }

    #[test]
    fn ode_expansion_reproduces_sech() {
        // u'' = u - u^3 has the solution sqrt(2) sech(y).
        let y0 = 0.4f64;
        let s = std::f64::consts::SQRT_2;
        let u0 = s / y0.cosh();
        let u1 = -s * y0.tanh() / y0.cosh();
        let u = second_order_scalar(u0, u1, |u| *u - *u * *u * *u);
        taylor_close(&u, |x| s / x.cosh(), y0);
    }
}
