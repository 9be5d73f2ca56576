//! Quadrature on the uniform symmetric grid.
//!
//! Convolutions with kernels that have a kink (or a jump) at `y = z` are done
//! with the trapezoid rule plus the Euler-Maclaurin terms produced by the kink,
//! which restores fourth order. The O(n) paths use exponential recursions; the
//! direct paths sum against a Toeplitz table of kernel values.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Convolution kernels `k(y - z)` used throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    /// `exp(-c |r|)`
    Exp(f64),
    /// `(exp(-c |r|) - 1) / c`, equal to `-|r|` at `c = 0`
    ExpMinusOne(f64),
    /// `|r|`
    Abs,
    /// `sgn(r) exp(-c |r|)`
    SignExp(f64),
}

impl Kernel {
    pub fn value(&self, r: f64) -> f64 {
        let a = r.abs();
        match *self {
            Kernel::Exp(c) => (-c * a).exp(),
            Kernel::ExpMinusOne(c) => {
                if c == 0.0 {
                    -a
                } else {
                    (-c * a).exp_m1() / c
                }
            }
            Kernel::Abs => a,
            Kernel::SignExp(c) => {
                if r == 0.0 {
                    0.0
                } else {
                    r.signum() * (-c * a).exp()
                }
            }
        }
    }

    fn needs_odd_derivatives(&self) -> bool {
        matches!(self, Kernel::SignExp(_))
    }
}

/// Derivative samples of the density, needed by the kink corrections.
/// Symmetric kernels read `d2`; the signed kernel reads `d1` and `d3`.
#[derive(Clone, Debug, Default)]
pub struct Derivs {
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
}

impl Derivs {
    /// Derivatives estimated from the samples themselves.
    pub fn from_samples(phi: &[f64], h: f64) -> Self {
        Self {
            d1: super::fd::derivative(phi, h, 1, 4),
            d2: super::fd::derivative(phi, h, 2, 4),
            d3: super::fd::derivative(phi, h, 3, 4),
        }
    }
}

fn kink_correction(kernel: Kernel, phi: f64, d: &Derivs, i: usize, h: f64) -> f64 {
    let h2 = h * h;
    let h4 = h2 * h2;
    let sym = |k1: f64, k3: f64| h2 / 6.0 * k1 * phi - h4 / 720.0 * (6.0 * k1 * d.d2[i] + 2.0 * k3 * phi);
    match kernel {
        Kernel::Exp(c) => sym(-c, -c * c * c),
        Kernel::ExpMinusOne(c) => sym(-1.0, -c * c),
        Kernel::Abs => sym(1.0, 0.0),
        Kernel::SignExp(c) => -h2 / 6.0 * d.d1[i] + h4 / 360.0 * (d.d3[i] + 3.0 * c * c * d.d1[i]),
    }
}

fn trapezoid_weights(n: usize, h: f64) -> impl Fn(usize) -> f64 {
    move |j| if j == 0 || j + 1 == n { 0.5 * h } else { h }
}

/// `∫ k(y_i - z) phi(z) dz` at every node in O(n).
pub fn convolve(kernel: Kernel, phi: &[f64], d: &Derivs, h: f64) -> Vec<f64> {
    let n = phi.len();
    let w = trapezoid_weights(n, h);
    let wphi: Vec<f64> = (0..n).map(|j| w(j) * phi[j]).collect();
    let mut out = vec![0.0; n];
    match kernel {
        Kernel::Exp(c) | Kernel::SignExp(c) => {
            let decay = (-c * h).exp();
            let mut left = vec![0.0; n];
            for i in 1..n {
                left[i] = decay * (left[i - 1] + wphi[i - 1]);
            }
            let mut right = vec![0.0; n];
            for i in (0..n - 1).rev() {
                right[i] = decay * (right[i + 1] + wphi[i + 1]);
            }
            for i in 0..n {
                out[i] = if kernel.needs_odd_derivatives() {
                    left[i] - right[i]
                } else {
                    left[i] + right[i] + wphi[i]
                };
            }
        }
        Kernel::ExpMinusOne(_) | Kernel::Abs => {
            let c = match kernel {
                Kernel::ExpMinusOne(c) => c,
                _ => 0.0,
            };
            let decay = (-c * h).exp();
            let step = if c == 0.0 { -h } else { (-c * h).exp_m1() / c };
            let mut left = vec![0.0; n];
            let mut mass = 0.0;
            for i in 1..n {
                mass += wphi[i - 1];
                left[i] = decay * left[i - 1] + step * mass;
            }
            let mut right = vec![0.0; n];
            mass = 0.0;
            for i in (0..n - 1).rev() {
                mass += wphi[i + 1];
                right[i] = decay * right[i + 1] + step * mass;
            }
            let sign = if kernel == Kernel::Abs { -1.0 } else { 1.0 };
            for i in 0..n {
                out[i] = sign * (left[i] + right[i]);
            }
        }
    }
    for i in 0..n {
        out[i] += kink_correction(kernel, phi[i], d, i, h);
    }
    out
}

/// Same as [`convolve`] by direct O(n^2) summation against a kernel table.
pub fn convolve_direct(kernel: Kernel, phi: &[f64], d: &Derivs, h: f64) -> Vec<f64> {
    let n = phi.len();
    let w = trapezoid_weights(n, h);
    let wphi: Vec<f64> = (0..n).map(|j| w(j) * phi[j]).collect();
    let table: Vec<f64> = (0..n).map(|k| kernel.value(k as f64 * h)).collect();
    let odd = kernel.needs_odd_derivatives();
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut below = 0.0;
        for j in 0..i {
            below += table[i - j] * wphi[j];
        }
        let mut above = 0.0;
        for j in i + 1..n {
            above += table[j - i] * wphi[j];
        }
        *slot = if odd { below - above } else { below + above + table[0] * wphi[i] };
        *slot += kink_correction(kernel, phi[i], d, i, h);
    }
    out
}

/// Composite trapezoid over all samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]))
}

/// `∫_0^{y_i} f` for every node, with Euler-Maclaurin end corrections.
/// `center` is the index of `y = 0`; `d1` and `d3` are derivatives of `f`.
pub fn cumulative_from_center(f: &[f64], d1: &[f64], d3: &[f64], h: f64, center: usize) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h / 12.0;
    let h4 = h.powi(4) / 720.0;
    let mut out = vec![0.0; n];
    let mut t = 0.0;
    for i in center + 1..n {
        t += 0.5 * h * (f[i - 1] + f[i]);
        out[i] = t - h2 * (d1[i] - d1[center]) + h4 * (d3[i] - d3[center]);
    }
    t = 0.0;
    for i in (0..center).rev() {
        t += 0.5 * h * (f[i + 1] + f[i]);
        let forward = t - h2 * (d1[center] - d1[i]) + h4 * (d3[center] - d3[i]);
        out[i] = -forward;
    }
    out
}

/// `∫_0^{y_i} f` for an analytic integrand, Gauss-Legendre on every cell.
pub fn cumulative_gauss(f: impl Fn(f64) -> f64, nodes: &[f64], center: usize, order: usize) -> Vec<f64> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("positive order"));
    let n = nodes.len();
    let mut out = vec![0.0; n];
    for i in center + 1..n {
        out[i] = out[i - 1] + rule.integrate(nodes[i - 1], nodes[i], &f);
    }
    for i in (0..center).rev() {
        out[i] = out[i + 1] - rule.integrate(nodes[i], nodes[i + 1], &f);
    }
    out
}
