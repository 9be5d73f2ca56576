use nlsmode::profile::{base_profile, peak_value, profile_omega_derivative, solve_profile};
use nlsmode::spectral::mode::LinearSolver;
use nlsmode::spectral::operators::{factorization_residuals, kernel_residuals, self_adjoint_residuals, TestFunction};
use nlsmode::spectral::{
    birman_schwinger_r, compute_potentials, fd_mode_oracle, internal_mode_from, solve_internal_mode,
    transformed_potentials, ModeOptions,
};
use nlsmode::{Error, Grid, NonlinearityModel};

fn square() -> NonlinearityModel {
    NonlinearityModel::power(1.0, 2.0).unwrap()
}

/// `Q` for `g = s²`: `Q² = 1 / (1/4 + √(1/16 + ω/3) cosh 2y)`.
fn quintic_q(omega: f64, y: f64) -> f64 {
    (1.0 / (0.25 + (1.0 / 16.0 + omega / 3.0).sqrt() * (2.0 * y).cosh())).sqrt()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn profile_matches_quintic_closed_form() {
    for omega in [1e-3, 1e-2, 5e-2] {
        let p = solve_profile(&square(), omega, Grid::default()).unwrap();
        let worst = p.grid.nodes().iter().zip(&p.q).map(|(&y, q)| (q - quintic_q(omega, y)).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-9, "omega {omega}: {worst:e}");
    }
}

#[test]
fn peak_from_quadratic_formula() {
    let w: f64 = 0.01;
    let q2 = (-0.5 + (0.25 + 4.0 * w / 3.0).sqrt()) / (2.0 * w / 3.0);
    let q0 = peak_value(&square(), w).unwrap();
    assert!((q0 - q2.sqrt()).abs() < 1e-12);
    assert!((q0 - 1.40500).abs() < 5e-6);
}

#[test]
fn fractional_power_profile_is_even_positive_and_integrated() {
    let model = NonlinearityModel::power(1.0, 1.5).unwrap();
    let p = solve_profile(&model, 1e-3, Grid::default()).unwrap();
    let n = p.q.len();
    for i in 0..n {
        assert!(p.q[i] > 0.0);
        assert!((p.q[i] - p.q[n - 1 - i]).abs() < 1e-14);
    }
    assert!(p.first_integral_residual().iter().all(|r| r.abs() <= 1e-9));
}

#[test]
fn distance_to_cubic_soliton_scales_with_eps() {
    let g = Grid::default();
    let base = base_profile(g);
    let ratios: Vec<f64> = [1e-3, 3e-3, 1e-2]
        .iter()
        .map(|&w| {
            let p = solve_profile(&square(), w, g).unwrap();
            let sup = p.q.iter().zip(&base.q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            sup / square().epsilon(w)
        })
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    assert!(hi / lo < 1.5, "{ratios:?}");
}

#[test]
fn omega_derivative_is_second_order_in_step() {
    let g = Grid::new(30.0, 2048);
    let w = 1e-2;
    let d1 = profile_omega_derivative(&square(), w, g, 2e-2).unwrap();
    let d2 = profile_omega_derivative(&square(), w, g, 1e-2).unwrap();
    let d3 = profile_omega_derivative(&square(), w, g, 5e-3).unwrap();
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let ratio = diff(&d1, &d2) / diff(&d2, &d3);
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
    // closed form: ∂_ω of the quintic profile by a fine central difference
    for (i, y) in g.nodes().into_iter().enumerate().step_by(97) {
        let fd = (quintic_q(w + 1e-6, y) - quintic_q(w - 1e-6, y)) / 2e-6;
        assert!((d3[i] - fd).abs() < 1e-6 * (1.0 + fd.abs()));
    }
}

#[test]
fn zero_model_has_no_potentials() {
    let p = solve_profile(&NonlinearityModel::Zero, 0.01, Grid::default()).unwrap();
    let pot = compute_potentials(&NonlinearityModel::Zero, &p);
    assert_eq!(pot.i_omega, 0.0);
    assert!(pot.a_plus.iter().chain(&pot.a_minus).all(|&v| v == 0.0));
    assert_eq!(birman_schwinger_r(0.1, &pot, p.grid, LinearSolver::Gmres).unwrap(), 0.0);
}

#[test]
fn integrated_defect_for_the_square_model() {
    for w in [1e-3, 1e-2] {
        let p = solve_profile(&square(), w, Grid::default()).unwrap();
        let pot = compute_potentials(&square(), &p);
        // a⁺ + a⁻ = −(2/3) ω Q⁴
        let oracle = 2.0 / 3.0 * w * simpson(|y| quintic_q(w, y).powi(4), -40.0, 40.0, 20_000);
        assert!((pot.i_omega - oracle).abs() < 1e-12 * oracle.max(1.0), "{} vs {oracle}", pot.i_omega);
        // individual potentials at leading order
        for i in (0..p.q.len()).step_by(311) {
            let q4 = w * p.q[i].powi(4);
            assert!((pot.a_plus[i] - q4 / 3.0).abs() < 1e-14);
            assert!((pot.a_minus[i] + q4).abs() < 1e-14);
        }
    }
    let p = solve_profile(&square(), 1e-5, Grid::default()).unwrap();
    let i = compute_potentials(&square(), &p).i_omega;
    assert!((i / 1e-5 / (32.0 / 9.0) - 1.0).abs() < 1e-3);
}

#[test]
fn pure_power_defect_formula() {
    for sigma in [1.5, 3.0] {
        let model = NonlinearityModel::power(1.0, sigma).unwrap();
        let w: f64 = 1e-2;
        let p = solve_profile(&model, w, Grid::default()).unwrap();
        let pot = compute_potentials(&model, &p);
        let h = p.grid.h();
        let integral: f64 = p.q.iter().map(|q| q.powf(2.0 * sigma)).sum::<f64>() * h;
        let expected = 2.0 * w.powf(sigma - 1.0) * (sigma - 1.0).powi(2) / (sigma + 1.0) * integral;
        assert!((pot.i_omega - expected).abs() < 1e-10 * expected);
        let eps = pot.eps_omega;
        for (i, q) in p.q.iter().enumerate() {
            assert!(pot.a_plus[i].abs() <= eps * q * q && pot.a_minus[i].abs() <= eps * q * q);
        }
    }
}

#[test]
fn birman_schwinger_function_near_zero() {
    let w = 1e-2;
    let p = solve_profile(&square(), w, Grid::default()).unwrap();
    let pot = compute_potentials(&square(), &p);
    let eps2 = pot.eps_omega.powi(2);
    let r0 = birman_schwinger_r(1e-9, &pot, p.grid, LinearSolver::Gmres).unwrap();
    assert!((r0 + pot.i_omega / 2.0).abs() <= eps2);
    let da = 1e-4;
    let a = birman_schwinger_r(5e-3, &pot, p.grid, LinearSolver::Gmres).unwrap();
    let b = birman_schwinger_r(5e-3 + da, &pot, p.grid, LinearSolver::Gmres).unwrap();
    assert!(((b - a) / da).abs() <= eps2);
}

#[test]
fn mode_asymptotics() {
    let g = Grid::default();
    let ys = g.nodes();
    for w in [1e-3, 1e-2] {
        let md = solve_internal_mode(&square(), w, g).unwrap();
        let rho = md.potentials.rho_omega;
        assert!(md.root_residual < 1e-12);
        assert!(md.lambda < 1.0);
        for (i, &y) in ys.iter().enumerate() {
            let e = (-md.alpha * y.abs()).exp();
            assert!(md.w2[i] >= 0.5 * e);
            assert!((md.w1[i] - e).abs() <= rho * e && (md.w2[i] - e).abs() <= rho * e);
        }
        assert!((md.v_pairing() - 1.0 / md.alpha).abs() <= rho / md.potentials.i_omega);
        let (r1, r2) = md.eigen_residuals();
        assert!(r1 <= 1e-6 && r2 <= 1e-6);
    }
    let md = solve_internal_mode(&square(), 1e-3, g).unwrap();
    assert!((md.alpha * 9.0 / 8e-3 - 1.0).abs() < 1e-2);
}

/// Eigen-equations checked with a fourth-order stencil and the closed-form
/// potentials `u₊ = 1 − 3Q² − 5ωQ⁴`, `u₋ = 1 − Q² − ωQ⁴`.
#[test]
fn eigen_equations_with_independent_stencil() {
    let w = 1e-2;
    let md = solve_internal_mode(&square(), w, Grid::default()).unwrap();
    let h = md.grid.h();
    let ys = md.grid.nodes();
    let d2 = |f: &[f64], i: usize| {
        (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
    };
    let (mut e1, mut e2, mut n1, mut n2) = (0.0, 0.0, 0.0, 0.0);
    for i in 2..ys.len() - 2 {
        let q2 = quintic_q(w, ys[i]).powi(2);
        let up = 1.0 - 3.0 * q2 - 5.0 * w * q2 * q2;
        let um = 1.0 - q2 - w * q2 * q2;
        e1 += (-d2(&md.v1, i) + up * md.v1[i] - md.lambda * md.v2[i]).powi(2);
        e2 += (-d2(&md.v2, i) + um * md.v2[i] - md.lambda * md.v1[i]).powi(2);
        n1 += md.v1[i].powi(2);
        n2 += md.v2[i].powi(2);
    }
    assert!((e1 / n2).sqrt() < 1e-6 && (e2 / n1).sqrt() < 1e-6, "{} {}", (e1 / n2).sqrt(), (e2 / n1).sqrt());
}

#[test]
fn oracle_agrees_and_stays_below_one() {
    for sigma in [1.5, 2.0, 3.0] {
        let model = NonlinearityModel::power(1.0, sigma).unwrap();
        let md = solve_internal_mode(&model, 1e-2, Grid::default()).unwrap();
        let o = fd_mode_oracle(&md.profile, &md.potentials).unwrap();
        assert!(o.lambda < 1.0);
        assert!((o.lambda - md.lambda).abs() / md.lambda <= 1e-4);
    }
}

#[test]
fn zero_model_oracle_reports_the_resonance() {
    let p = solve_profile(&NonlinearityModel::Zero, 0.01, Grid::default()).unwrap();
    let pot = compute_potentials(&NonlinearityModel::Zero, &p);
    assert!(matches!(fd_mode_oracle(&p, &pot), Err(Error::Oracle(_))));
    assert!(internal_mode_from(p, pot, ModeOptions::default()).is_err());
}

#[test]
fn transformed_potentials_integral_and_decay() {
    let g = Grid::default();
    let ys = g.nodes();
    let mut devs = Vec::new();
    for w in [1e-3, 1e-2] {
        let md = solve_internal_mode(&square(), w, g).unwrap();
        let tp = transformed_potentials(&md).unwrap();
        let pot = &md.potentials;
        let dev = (tp.int_y0 / (4.0 * md.alpha) - 1.0).abs();
        assert!(dev <= pot.rho_omega);
        assert!((tp.int_y0 / pot.i_omega - 1.0).abs() <= pot.rho_omega);
        devs.push(dev);
        let eps = pot.eps_omega;
        for (i, &y) in ys.iter().enumerate() {
            let bound = eps * (-(md.kappa - md.alpha) * y.abs()).exp();
            if bound < 1e-12 {
                continue;
            }
            for k in [tp.k0[i], tp.k1[i], tp.k2[i]] {
                assert!(k.abs() <= 10.0 * bound);
            }
        }
    }
    assert!(devs[1] / devs[0] > 5.0);
}

#[test]
fn operator_identities_on_test_functions() {
    let md = solve_internal_mode(&square(), 1e-2, Grid::default()).unwrap();
    let tests = TestFunction::random_set(5, 7);
    for (a, b) in factorization_residuals(&md, &tests) {
        assert!(a <= 1e-4 && b <= 1e-4, "{a:e} {b:e}");
    }
    for pair in tests.windows(2) {
        let (p, m) = self_adjoint_residuals(&md.profile, &pair[0], &pair[1]);
        assert!(p <= 1e-8 && m <= 1e-8, "{p:e} {m:e}");
    }
    let (k1, k2) = kernel_residuals(&md.profile);
    assert!(k1 <= 1e-6 && k2 <= 1e-6, "{k1:e} {k2:e}");
}

#[test]
fn h2_ratio_is_half_inverse_rho() {
    for sigma in [1.5, 2.0, 3.0] {
        let model = NonlinearityModel::power(1.0, sigma).unwrap();
        for w in [1e-2, 1e-3] {
            let p = solve_profile(&model, w, Grid::default()).unwrap();
            let pot = compute_potentials(&model, &p);
            let want = 1.0 / (2.0 * pot.rho_omega);
            assert!((model.h2_ratio(&p) - want).abs() <= 1e-6 * want);
        }
    }
}
