//! Internal mode of the pair `L₊V₁ = λV₂`, `L₋V₂ = λV₁` through the scalar
//! Birman-Schwinger equation `s(α) = α + r(α)/2 = 0`.

use nalgebra::{DMatrix, DVector};

use super::farfield::{grid_norm, line_inner, Tail};
use super::potentials::{compute_potentials, l_minus_potential, l_plus_potential, l_plus_potential_jet, potential_jets, Potentials};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nonlinearity::NonlinearityModel;
use crate::numerics::brent;
use crate::numerics::fd;
use crate::numerics::jet::{second_order_pair, Jet};
use crate::numerics::krylov::{gmres, GmresOptions};
use crate::numerics::quad::{convolve, trapezoid, Derivs, Kernel};
use crate::profile::{solve_profile, SolitonProfile};

/// How the Nyström system `(I + N_α P) f = e₁` is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LinearSolver {
    #[default]
    Gmres,
    /// Assemble the full matrix and LU-factor it. Only for small grids.
    Dense,
}

const DENSE_LIMIT: usize = 4000;

/// Discretized `N_α P` acting on stacked `(f₁, f₂)`.
struct BsOperator<'a> {
    pot: &'a Potentials,
    alpha: f64,
    kappa: f64,
    h: f64,
}

impl BsOperator<'_> {
    fn len(&self) -> usize {
        self.pot.b_plus.len()
    }

    /// `P f` split into its two components.
    fn project(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.len();
        let (bp, bm) = (&self.pot.b_plus, &self.pot.b_minus);
        let p1 = (0..n).map(|i| bp[i] * f[i] + bm[i] * f[n + i]).collect();
        let p2 = (0..n).map(|i| bm[i] * f[i] + bp[i] * f[n + i]).collect();
        (p1, p2)
    }

    /// `out = f + N_α P f`.
    fn apply(&self, f: &[f64], out: &mut [f64]) {
        let n = self.len();
        let (p1, p2) = self.project(f);
        let c1 = convolve(Kernel::ExpMinusOne(self.alpha), &p1, &Derivs::from_samples(&p1, self.h), self.h);
        let c2 = convolve(Kernel::Exp(self.kappa), &p2, &Derivs::from_samples(&p2, self.h), self.h);
        for i in 0..n {
            out[i] = f[i] + 0.5 * c1[i];
            out[n + i] = f[n + i] + 0.5 / self.kappa * c2[i];
        }
    }

    fn rhs(&self) -> Vec<f64> {
        let n = self.len();
        let mut e = vec![0.0; 2 * n];
        e[..n].iter_mut().for_each(|v| *v = 1.0);
        e
    }

    fn dense_solve(&self) -> Result<Vec<f64>> {
        let m = 2 * self.len();
        if m > DENSE_LIMIT {
            return Err(Error::Domain(format!("dense Birman-Schwinger solve needs 2(2n+1) <= {DENSE_LIMIT}, got {m}")));
        }
        let mut a = DMatrix::<f64>::zeros(m, m);
        let mut unit = vec![0.0; m];
        let mut col = vec![0.0; m];
        for j in 0..m {
            unit[j] = 1.0;
            self.apply(&unit, &mut col);
            unit[j] = 0.0;
            a.set_column(j, &DVector::from_column_slice(&col));
        }
        let b = DVector::from_vec(self.rhs());
        let x = a.lu().solve(&b).ok_or(Error::IllConditioned { residual: f64::INFINITY })?;
        Ok(x.as_slice().to_vec())
    }

    fn solve(&self, solver: LinearSolver, warm: Option<&[f64]>) -> Result<(Vec<f64>, usize)> {
        match solver {
            LinearSolver::Dense => Ok((self.dense_solve()?, 0)),
            LinearSolver::Gmres => {
                let b = self.rhs();
                let opts = GmresOptions { rel_tol: 1e-13, ..Default::default() };
                let out = gmres(|v, o| self.apply(v, o), &b, warm, opts);
                if !out.converged && out.rel_residual > 1e-10 {
                    return Err(Error::IllConditioned { residual: out.rel_residual });
                }
                Ok((out.x, out.iterations))
            }
        }
    }
}

fn kappa_of(alpha: f64) -> f64 {
    (2.0 - alpha * alpha).sqrt()
}

/// `r(α) = ∫ e₁·P (I + N_α P)^{-1} e₁` together with the solution `f`.
fn r_with_solution(
    alpha: f64,
    pot: &Potentials,
    h: f64,
    solver: LinearSolver,
    warm: Option<&[f64]>,
) -> Result<(f64, Vec<f64>, usize)> {
    let op = BsOperator { pot, alpha, kappa: kappa_of(alpha), h };
    let (f, its) = op.solve(solver, warm)?;
    let (p1, _) = op.project(&f);
    Ok((trapezoid(&p1, h), f, its))
}

/// The Birman-Schwinger function `r(α, ω)`.
pub fn birman_schwinger_r(alpha: f64, potentials: &Potentials, grid: Grid, solver: LinearSolver) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1)")));
    }
    if potentials.b_plus.iter().all(|&v| v == 0.0) && potentials.b_minus.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    Ok(r_with_solution(alpha, potentials, grid.h(), solver, None)?.0)
}

#[derive(Clone, Debug)]
pub struct InternalMode {
    pub omega: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub grid: Grid,
    pub profile: SolitonProfile,
    pub potentials: Potentials,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    /// Taylor jets at every node; `V` jets are exact to order 6 and 4.
    pub w1_jets: Vec<Jet>,
    pub w2_jets: Vec<Jet>,
    pub v1_jets: Vec<Jet>,
    pub v2_jets: Vec<Jet>,
    /// `|s(α)|` at the accepted root.
    pub root_residual: f64,
    pub linear_iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ModeOptions {
    pub solver: LinearSolver,
    /// Upper bracket end is `2 (1 + margin) I_ω/4`.
    pub margin: f64,
    pub max_doublings: usize,
}

impl Default for ModeOptions {
    fn default() -> Self {
        Self { solver: LinearSolver::Gmres, margin: 0.25, max_doublings: 6 }
    }
}

pub fn solve_internal_mode(model: &NonlinearityModel, omega: f64, grid: Grid) -> Result<InternalMode> {
    let profile = solve_profile(model, omega, grid)?;
    let potentials = compute_potentials(model, &profile);
    internal_mode_from(profile, potentials, ModeOptions::default())
}

pub fn internal_mode_from(profile: SolitonProfile, potentials: Potentials, opts: ModeOptions) -> Result<InternalMode> {
    let omega = profile.omega;
    let i_omega = potentials.i_omega;
    if profile.model.is_zero() || !(i_omega > 0.0) {
        return Err(Error::NoInternalMode { omega });
    }
    let grid = profile.grid;
    let h = grid.h();
    let guess = 0.25 * i_omega;
    let lo = 1e-3 * guess;

    let warm = std::cell::RefCell::new(None::<Vec<f64>>);
    let iters = std::cell::Cell::new(0usize);
    let failure = std::cell::RefCell::new(None::<Error>);
    let s = |a: f64| -> f64 {
        let w = warm.borrow().clone();
        match r_with_solution(a, &potentials, h, opts.solver, w.as_deref()) {
            Ok((r, f, its)) => {
                iters.set(iters.get() + its);
                *warm.borrow_mut() = Some(f);
                a + 0.5 * r
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let s_lo = s(lo);
    let mut hi = 2.0 * guess * (1.0 + opts.margin);
    let mut s_hi = s(hi);
    let mut doublings = 0;
    while !(s_lo < 0.0 && s_hi > 0.0) {
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        if doublings == opts.max_doublings || 2.0 * hi >= 1.0 {
            return Err(Error::NoInternalMode { omega });
        }
        hi *= 2.0;
        s_hi = s(hi);
        doublings += 1;
    }
    let alpha = brent(lo, hi, 1e-15 * guess, &s).ok_or(Error::NoInternalMode { omega })?;
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }

    // final solve at the root, also giving X = f
    let (r, f, its) = r_with_solution(alpha, &potentials, h, opts.solver, warm.borrow().as_deref())?;
    let root_residual = (alpha + 0.5 * r).abs();
    let linear_iterations = iters.get() + its;
    build_mode(profile, potentials, alpha, &f, root_residual, linear_iterations)
}

fn build_mode(
    profile: SolitonProfile,
    potentials: Potentials,
    alpha: f64,
    f: &[f64],
    root_residual: f64,
    linear_iterations: usize,
) -> Result<InternalMode> {
    let grid = profile.grid;
    let h = grid.h();
    let n = grid.len();
    let omega = profile.omega;
    let kappa = kappa_of(alpha);
    let lambda = 1.0 - alpha * alpha;
    let model = profile.model.clone();

    let x1 = f[..n].to_vec();
    let x2 = f[n..].to_vec();
    let op = BsOperator { pot: &potentials, alpha, kappa, h };
    let (p1, p2) = op.project(f);
    let d1 = convolve(Kernel::SignExp(alpha), &p1, &Derivs::from_samples(&p1, h), h);
    let d2 = convolve(Kernel::SignExp(kappa), &p2, &Derivs::from_samples(&p2, h), h);

    let mut w1_jets = Vec::with_capacity(n);
    let mut w2_jets = Vec::with_capacity(n);
    let mut v1_jets = Vec::with_capacity(n);
    let mut v2_jets = Vec::with_capacity(n);
    for i in 0..n {
        let q = profile.jet(i);
        let (ap, am) = potential_jets(&model, omega, &q);
        let bp = (ap + am) * 0.5;
        let bm = (ap - am) * 0.5;
        let (j1, j2) = second_order_pair([x1[i], x2[i]], [0.5 * d1[i], 0.5 * d2[i]], |a, b| {
            (*a * (alpha * alpha) + bp * *a + bm * *b, *b * (kappa * kappa) + bm * *a + bp * *b)
        });
        let w1 = j1 + j2;
        let w2 = j1 - j2;
        let v1 = s_star_squared(&w1, &q, &model, omega);
        let u_plus = l_plus_potential_jet(&model, omega, &q);
        let v2 = (-(v1.diff().diff()) + u_plus * v1) * (1.0 / lambda);
        w1_jets.push(w1);
        w2_jets.push(w2);
        v1_jets.push(v1);
        v2_jets.push(v2);
    }
    let w1 = w1_jets.iter().map(Jet::value).collect();
    let w2: Vec<f64> = w2_jets.iter().map(Jet::value).collect();
    let v1 = v1_jets.iter().map(Jet::value).collect();
    let v2 = v2_jets.iter().map(Jet::value).collect();

    let ys = grid.nodes();
    if let Some(i) = (0..n).find(|&i| w2[i] < 0.5 * (-alpha * ys[i].abs()).exp()) {
        return Err(Error::DegenerateDenominator { y: ys[i] });
    }

    Ok(InternalMode {
        omega,
        alpha,
        lambda,
        kappa,
        grid,
        profile,
        potentials,
        x1,
        x2,
        w1,
        w2,
        v1,
        v2,
        w1_jets,
        w2_jets,
        v1_jets,
        v2_jets,
        root_residual,
        linear_iterations,
    })
}

/// `(S*)² f = f'' + 2 (Q'/Q) f' + (Q''/Q) f`, with `Q''/Q` read off the
/// profile equation.
pub fn s_star_squared(f: &Jet, q: &Jet, model: &NonlinearityModel, omega: f64) -> Jet {
    let z = q.diff().div(q);
    let ratio = super::potentials::l_minus_potential_jet(model, omega, q);
    let fp = f.diff();
    fp.diff() + z * fp * 2.0 + ratio * *f
}

impl InternalMode {
    pub fn v1_tail(&self) -> Tail {
        Tail::exponential(*self.v1.last().unwrap(), self.alpha)
    }

    pub fn v2_tail(&self) -> Tail {
        Tail::exponential(*self.v2.last().unwrap(), self.alpha)
    }

    /// `⟨V₁, V₂⟩` over the whole line.
    pub fn v_pairing(&self) -> f64 {
        line_inner(&self.v1, Some(self.v1_tail()), &self.v2, Some(self.v2_tail()), self.grid.h())
    }

    /// k-th derivative samples of `W₁` or `W₂` (`which` is 1 or 2).
    pub fn w_derivative(&self, which: usize, k: usize) -> Vec<f64> {
        let jets = if which == 1 { &self.w1_jets } else { &self.w2_jets };
        jets.iter().map(|j| j.derivative(k)).collect()
    }

    /// Relative residuals `‖L₊V₁ − λV₂‖/‖V₂‖` and `‖L₋V₂ − λV₁‖/‖V₁‖`, with
    /// the second derivatives taken by eighth-order finite differences.
    pub fn eigen_residuals(&self) -> (f64, f64) {
        let h = self.grid.h();
        let model = &self.profile.model;
        let w = self.omega;
        let v1pp = fd::derivative(&self.v1, h, 2, 4);
        let v2pp = fd::derivative(&self.v2, h, 2, 4);
        let n = self.v1.len();
        let mut r1 = vec![0.0; n];
        let mut r2 = vec![0.0; n];
        for i in 0..n {
            let q = self.profile.q[i];
            r1[i] = -v1pp[i] + l_plus_potential(model, w, q) * self.v1[i] - self.lambda * self.v2[i];
            r2[i] = -v2pp[i] + l_minus_potential(model, w, q) * self.v2[i] - self.lambda * self.v1[i];
        }
        // the far ends only see the one-sided stencils of a pure exponential
        let m = 8;
        let inner = |v: &[f64]| grid_norm(&v[m..n - m], h);
        (inner(&r1) / inner(&self.v2), inner(&r2) / inner(&self.v1))
    }
}
