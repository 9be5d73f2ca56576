//! Operator identities checked on smooth test functions.
//!
//! Everything is applied to Taylor jets at each node, so the residuals only
//! measure how well the ingredients (profile, potentials, mode) satisfy their
//! equations, not a differencing error.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use super::farfield::grid_norm;
use super::mode::InternalMode;
use super::potentials::{l_minus_potential_jet, l_plus_potential_jet, potential_jets};
use super::transformed::k_jets;
use crate::numerics::fd;
use crate::numerics::jet::Jet;
use crate::numerics::quad::trapezoid;
use crate::profile::SolitonProfile;

/// `-f'' + u f`.
fn schrodinger(f: &Jet, u: &Jet) -> Jet {
    -(f.diff().diff()) + *u * *f
}

/// `S f = Q (f/Q)' = f' - (Q'/Q) f`.
fn s_op(f: &Jet, z: &Jet) -> Jet {
    f.diff() - *z * *f
}

/// Gaussian bump times a linear factor, with random shape.
#[derive(Clone, Copy, Debug)]
pub struct TestFunction {
    pub center: f64,
    pub width: f64,
    pub c0: f64,
    pub c1: f64,
}

impl TestFunction {
    pub fn random_set(count: usize, seed: u64) -> Vec<Self> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..count)
            .map(|_| Self {
                center: rng.random_range(-3.0..3.0),
                width: rng.random_range(0.7..2.0),
                c0: rng.random_range(-1.0..1.0),
                c1: rng.random_range(-1.0..1.0),
            })
            .collect()
    }

    pub fn jet(&self, y: f64) -> Jet {
        let t = Jet::variable(y) - self.center;
        let g = (t * t * (-0.5 / (self.width * self.width))).exp();
        (Jet::constant(self.c0) + Jet::variable(y) * self.c1) * g
    }
}

fn rel(a: &[f64], b: &[f64], h: f64) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    grid_norm(&d, h) / grid_norm(a, h).max(f64::MIN_POSITIVE)
}

/// Relative residuals of `S²L₊L₋φ = M₊M₋S²φ` and `U M₊M₋ φ = K U φ` for each
/// test function.
pub fn factorization_residuals(mode: &InternalMode, tests: &[TestFunction]) -> Vec<(f64, f64)> {
    let model = &mode.profile.model;
    let w = mode.omega;
    let ys = mode.grid.nodes();
    let h = mode.grid.h();
    let n = ys.len();
    let node_data: Vec<_> = (0..n)
        .map(|i| {
            let q = mode.profile.jet(i);
            let (ap, am) = potential_jets(model, w, &q);
            let up = l_plus_potential_jet(model, w, &q);
            let um = l_minus_potential_jet(model, w, &q);
            let z = q.diff().div(&q);
            let w2 = mode.w2_jets[i];
            let xi = w2.diff().div(&w2);
            (ap + 1.0, am + 1.0, up, um, z, xi, k_jets(mode, i))
        })
        .collect();
    tests
        .iter()
        .map(|t| {
            let mut l1 = vec![0.0; n];
            let mut r1 = vec![0.0; n];
            let mut l2 = vec![0.0; n];
            let mut r2 = vec![0.0; n];
            for i in 0..n {
                let (mp, mm, up, um, z, xi, (k2, k1, k0)) = &node_data[i];
                let phi = t.jet(ys[i]);
                let lhs = s_op(&s_op(&schrodinger(&schrodinger(&phi, um), up), z), z);
                let s2 = s_op(&s_op(&phi, z), z);
                let rhs = schrodinger(&schrodinger(&s2, mm), mp);
                l1[i] = lhs.value();
                r1[i] = rhs.value();

                let u = |f: &Jet| f.diff() - *xi * *f;
                let mmphi = schrodinger(&schrodinger(&phi, mm), mp);
                l2[i] = u(&mmphi).value();
                let v = u(&phi);
                let v2 = v.diff().diff();
                let kv = v2.diff().diff() - v2 * 2.0 + *k2 * v2 + *k1 * v.diff() + *k0 * v + v;
                r2[i] = kv.value();
            }
            (rel(&l1, &r1, h), rel(&l2, &r2, h))
        })
        .collect()
}

/// `|⟨L u, v⟩ − ⟨u, L v⟩| / (‖Lu‖‖v‖)` for `L₊` and `L₋`.
pub fn self_adjoint_residuals(profile: &SolitonProfile, u: &TestFunction, v: &TestFunction) -> (f64, f64) {
    let model = &profile.model;
    let w = if model.is_zero() { 1.0 } else { profile.omega };
    let ys = profile.grid.nodes();
    let h = profile.grid.h();
    let n = ys.len();
    let mut out = [0.0; 2];
    for (k, slot) in out.iter_mut().enumerate() {
        let (mut lu_v, mut u_lv, mut lu2, mut v2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            let q = profile.jet(i);
            let pot = if k == 0 { l_plus_potential_jet(model, w, &q) } else { l_minus_potential_jet(model, w, &q) };
            let (uj, vj) = (u.jet(ys[i]), v.jet(ys[i]));
            let lu = schrodinger(&uj, &pot).value();
            lu_v[i] = lu * vj.value();
            u_lv[i] = uj.value() * schrodinger(&vj, &pot).value();
            lu2[i] = lu * lu;
            v2[i] = vj.value() * vj.value();
        }
        let scale = (trapezoid(&lu2, h) * trapezoid(&v2, h)).sqrt();
        *slot = (trapezoid(&lu_v, h) - trapezoid(&u_lv, h)).abs() / scale;
    }
    (out[0], out[1])
}

/// `‖L₋Q‖/‖Q‖` and `‖L₊Q'‖/‖Q'‖` with eighth-order differences.
pub fn kernel_residuals(profile: &SolitonProfile) -> (f64, f64) {
    let model = &profile.model;
    let w = if model.is_zero() { 1.0 } else { profile.omega };
    let h = profile.grid.h();
    let qpp = fd::derivative(&profile.q, h, 2, 4);
    let qppp = fd::derivative(&profile.qp, h, 2, 4);
    let n = profile.q.len();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        let q = profile.q[i];
        a[i] = -qpp[i] + super::potentials::l_minus_potential(model, w, q) * q;
        b[i] = -qppp[i] + super::potentials::l_plus_potential(model, w, q) * profile.qp[i];
    }
    (grid_norm(&a, h) / grid_norm(&profile.q, h), grid_norm(&b, h) / grid_norm(&profile.qp, h))
}
