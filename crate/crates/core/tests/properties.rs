use nlsmode::nls_sim::{extract_b, modulation_decompose, ModeSnapshot, Perturbation, SimConfig, SimulationState};
use nlsmode::profile::solve_profile;
use nlsmode::spectral::operators::{self_adjoint_residuals, TestFunction};
use nlsmode::spectral::{compute_potentials, solve_internal_mode};
use nlsmode::{Grid, NonlinearityModel};
use num_complex::Complex64;
use proptest::prelude::*;

fn test_function() -> impl Strategy<Value = TestFunction> {
    (-3.0..3.0f64, 0.6..2.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(center, width, c0, c1)| TestFunction { center, width, c0, c1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h2_identity_holds(sigma in 1.2..3.5f64, omega in 1e-3..2e-2f64) {
        let model = NonlinearityModel::power(1.0, sigma).unwrap();
        let p = solve_profile(&model, omega, Grid::new(40.0, 2048)).unwrap();
        let pot = compute_potentials(&model, &p);
        let want = 1.0 / (2.0 * pot.rho_omega);
        prop_assert!((model.h2_ratio(&p) - want).abs() <= 1e-6 * want);
    }

    #[test]
    fn antiderivative_differentiates_to_g(sigma in 1.1..5.0f64, a in -2.0..2.0f64, s in 0.05..1.0f64) {
        let m = NonlinearityModel::power(a, sigma).unwrap();
        let d = 1e-5;
        let fd = (m.antiderivative(s + d) - m.antiderivative(s - d)) / (2.0 * d);
        prop_assert!((fd - m.eval_g(s, 0).unwrap()).abs() < 1e-8 * (1.0 + fd.abs()));
    }

    #[test]
    fn linearized_operators_are_symmetric(u in test_function(), v in test_function(), sigma in 1.5..3.0f64) {
        let model = NonlinearityModel::power(1.0, sigma).unwrap();
        let p = solve_profile(&model, 1e-2, Grid::new(30.0, 2048)).unwrap();
        let (plus, minus) = self_adjoint_residuals(&p, &u, &v);
        prop_assert!(plus <= 1e-8 && minus <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn extract_b_is_real_linear(c1 in -3.0..3.0f64, c2 in -3.0..3.0f64, u in test_function(), w in test_function()) {
        let model = NonlinearityModel::power(1.0, 2.0).unwrap();
        let mode = solve_internal_mode(&model, 0.05, Grid::new(30.0, 1024)).unwrap();
        let ys = mode.grid.nodes();
        let snap = ModeSnapshot::on_nodes(&mode, &ys);
        let h = mode.grid.h();
        let f = |t: &TestFunction| -> Vec<Complex64> {
            ys.iter().map(|&y| { let j = t.jet(y); Complex64::new(j.value(), j.value() * y.cos()) }).collect()
        };
        let (fu, fw) = (f(&u), f(&w));
        let mix: Vec<Complex64> = fu.iter().zip(&fw).map(|(a, b)| a * c1 + b * c2).collect();
        let (bu, _) = extract_b(&fu, &snap, h);
        let (bw, _) = extract_b(&fw, &snap, h);
        let (bm, _) = extract_b(&mix, &snap, h);
        prop_assert!((bm - (bu * c1 + bw * c2)).norm() < 1e-10 * (1.0 + bm.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn decomposition_is_gauge_covariant(shift in -3.0..3.0f64) {
        let cfg = SimConfig { perturbation: Perturbation::InternalMode, domain_half: 100.0, points: 2048, ..SimConfig::default() };
        let (mut s, _) = SimulationState::init(&cfg).unwrap();
        let a = modulation_decompose(&mut s, 0.0, cfg.omega0, cfg.domain_half).unwrap();
        s.psi.iter_mut().for_each(|p| *p *= Complex64::from_polar(1.0, shift));
        let b = modulation_decompose(&mut s, shift, cfg.omega0, cfg.domain_half).unwrap();
        prop_assert!((b.gamma - a.gamma - shift).abs() < 1e-10);
        prop_assert!((b.omega - a.omega).abs() < 1e-12);
    }
}

#[test]
fn grid_nodes_are_symmetric() {
    let g = Grid::new(12.5, 300);
    let ys = g.nodes();
    for i in 0..g.len() {
        assert_eq!(ys[i], -ys[g.mirror(i)]);
    }
    assert_eq!(ys[g.center()], 0.0);
}
