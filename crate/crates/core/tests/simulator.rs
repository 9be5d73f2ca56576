use nlsmode::nls_sim::{
    extract_b, modulation_decompose, run_experiment, ModeSnapshot, Perturbation, SimConfig, SimulationState,
};
use nlsmode::spectral::solve_internal_mode;
use nlsmode::{Grid, NonlinearityModel};
use num_complex::Complex64;

fn small(perturbation: Perturbation) -> SimConfig {
    SimConfig { perturbation, domain_half: 100.0, points: 4096, ..SimConfig::default() }
}

/// `Q` for `g = s²` in closed form: `Q² = 1 / (1/4 + √(1/16 + ω/3) cosh 2y)`.
fn quintic_q(omega: f64, y: f64) -> f64 {
    (1.0 / (0.25 + (1.0 / 16.0 + omega / 3.0).sqrt() * (2.0 * y).cosh())).sqrt()
}

#[test]
fn exact_soliton_rotates_in_phase() {
    let mut cfg = small(Perturbation::None);
    cfg.dt = 0.005;
    let w = cfg.omega0;
    let (mut s, _) = SimulationState::init(&cfg).unwrap();
    let mut worst: f64 = 0.0;
    let checks = 10;
    let per = (10.0 / w / cfg.dt / checks as f64).round() as usize;
    for _ in 0..checks {
        for _ in 0..per {
            s.step(cfg.dt).unwrap();
        }
        let rot = Complex64::from_polar(1.0, w * s.t);
        for (p, &x) in s.psi.iter().zip(&s.x) {
            let exact = rot * (w.sqrt() * quintic_q(w, w.sqrt() * x));
            worst = worst.max((p - exact).norm());
        }
    }
    assert!(worst <= 1e-6, "sup error {worst:e}");
}

#[test]
fn mass_is_kept_by_every_step() {
    let (mut s, _) = SimulationState::init(&small(Perturbation::InternalMode)).unwrap();
    for _ in 0..50 {
        let before = s.mass();
        s.step(0.05).unwrap();
        assert!(((s.mass() - before) / before).abs() < 1e-13);
    }
}

#[test]
fn initial_data_is_even_and_momentum_stays_zero() {
    let cfg = small(Perturbation::InternalMode);
    let (mut s, _) = SimulationState::init(&cfg).unwrap();
    let m = s.psi.len();
    // x_j = -X + j dx, so the mirror of node j is node m - j
    for j in 1..m {
        assert_eq!(s.psi[j], s.psi[m - j]);
    }
    for _ in 0..400 {
        s.step(cfg.dt).unwrap();
    }
    assert!(s.momentum().abs() <= 1e-10);
}

#[test]
fn richardson_pair_is_fourth_order() {
    let cfg = SimConfig { perturbation: Perturbation::None, domain_half: 100.0, points: 2048, ..SimConfig::default() };
    let t_end = 20.0;
    let w = cfg.omega0;
    let run = |dt: f64| {
        let (mut s, _) = SimulationState::init(&cfg).unwrap();
        for _ in 0..(t_end / dt).round() as usize {
            s.step(dt).unwrap();
        }
        s.psi
    };
    let (s, _) = SimulationState::init(&cfg).unwrap();
    let rot = Complex64::from_polar(1.0, w * t_end);
    let exact: Vec<Complex64> = s.x.iter().map(|&x| rot * (w.sqrt() * quintic_q(w, w.sqrt() * x))).collect();
    let runs: Vec<_> = [0.8, 0.4, 0.2].iter().map(|&dt| run(dt)).collect();
    let err = |a: &[Complex64], b: &[Complex64]| {
        a.iter().zip(b).zip(&exact).map(|((a, b), e)| ((b * 4.0 - a) / 3.0 - e).norm()).fold(0.0, f64::max)
    };
    let e1 = err(&runs[0], &runs[1]);
    let e2 = err(&runs[1], &runs[2]);
    let single = runs[2].iter().zip(&exact).map(|(a, e)| (a - e).norm()).fold(0.0, f64::max);
    assert!(e2 < single, "extrapolation {e2:e} should beat the finest run {single:e}");
    let ratio = e1 / e2;
    assert!((10.0..=24.0).contains(&ratio), "error ratio {ratio} ({e1:e}, {e2:e})");
}

#[test]
fn decomposition_of_a_rotated_soliton() {
    let cfg = small(Perturbation::None);
    let (mut s, _) = SimulationState::init(&cfg).unwrap();
    let g0 = 0.7;
    s.psi.iter_mut().for_each(|p| *p *= Complex64::from_polar(1.0, g0));
    let d = modulation_decompose(&mut s, 0.6, 0.052, cfg.domain_half).unwrap();
    assert!((d.gamma - g0).abs() < 1e-10);
    assert!((d.omega - cfg.omega0).abs() < 1e-10);
    assert!(d.u.iter().all(|u| u.norm() < 1e-8));
}

#[test]
fn phase_shift_moves_only_gamma() {
    let cfg = small(Perturbation::InternalMode);
    let (mut s, _) = SimulationState::init(&cfg).unwrap();
    let a = modulation_decompose(&mut s, 0.0, cfg.omega0, cfg.domain_half).unwrap();
    assert!(a.residuals.iter().all(|r| r.abs() <= 1e-10));
    let shift = 1.3;
    s.psi.iter_mut().for_each(|p| *p *= Complex64::from_polar(1.0, shift));
    let b = modulation_decompose(&mut s, shift, cfg.omega0, cfg.domain_half).unwrap();
    assert!((b.gamma - a.gamma - shift).abs() < 1e-10);
    assert!((b.omega - a.omega).abs() < 1e-12);
    for (x, y) in a.u.iter().zip(&b.u) {
        assert!((x.norm() - y.norm()).abs() < 1e-10);
    }
}

#[test]
fn b_of_the_mode_itself() {
    let model = NonlinearityModel::power(1.0, 2.0).unwrap();
    let mode = solve_internal_mode(&model, 0.05, Grid::new(40.0, 2048)).unwrap();
    let ys: Vec<f64> = mode.grid.nodes();
    let snap = ModeSnapshot::on_nodes(&mode, &ys);
    let h = mode.grid.h();
    let u: Vec<Complex64> = mode.v1.iter().zip(&mode.v2).map(|(&a, &b)| Complex64::new(a, b)).collect();
    let (b, v) = extract_b(&u, &snap, h);
    assert!((b - Complex64::new(1.0, 1.0)).norm() < 1e-12);
    assert!(v.iter().all(|v| v.norm() < 1e-12));

    // u orthogonal to the span gives b = 0 and a remainder orthogonal to V
    let w: Vec<Complex64> = ys.iter().map(|&y| Complex64::new(y * (-y * y).exp(), y * (-y * y).exp())).collect();
    let (b, v) = extract_b(&w, &snap, h);
    assert!(b.norm() < 1e-14);
    let p1: f64 = v.iter().zip(&snap.v2).map(|(v, s)| v.re * s).sum();
    let p2: f64 = v.iter().zip(&snap.v1).map(|(v, s)| v.im * s).sum();
    assert!(p1.abs() < 1e-14 && p2.abs() < 1e-14);
}

#[test]
fn initial_amplitude_matches_construction() {
    let cfg = small(Perturbation::InternalMode);
    let mut short = cfg.clone();
    short.t_end = short.sample_every;
    let r = run_experiment(&short).unwrap();
    let first = &r.rows[0];
    let eps = cfg.amplitude;
    assert!(((first.b1 - eps) / eps).abs() < 1e-6, "b1 = {}", first.b1);
    assert!(((first.b2 - eps) / eps).abs() < 1e-6, "b2 = {}", first.b2);
}

#[test]
fn unperturbed_run_stays_at_the_soliton() {
    let mut cfg = small(Perturbation::None);
    cfg.dt = 0.005;
    cfg.t_end = 50.0;
    cfg.sample_every = 1.0;
    let r = run_experiment(&cfg).unwrap();
    assert!(r.error.is_none());
    for row in &r.rows {
        assert!(row.abs_b <= 1e-8, "|b| = {:e} at t = {}", row.abs_b, row.t);
        assert!((row.omega - cfg.omega0).abs() <= 1e-8);
    }
}

#[test]
fn rescaled_clock_matches_omega_times_t() {
    let mut cfg = small(Perturbation::InternalMode);
    cfg.t_end = 400.0;
    let r = run_experiment(&cfg).unwrap();
    let s = &r.summary;
    // ds/dt = ω with ω ≈ ω₀, so the two peaks differ by that factor
    let mean_w = r.rows.iter().map(|r| r.omega).sum::<f64>() / r.rows.len() as f64;
    assert!((s.b_frequency_rescaled - s.b_frequency / mean_w).abs() <= s.bin_width_rescaled);
    assert!((s.b_frequency - s.predicted_frequency).abs() <= s.bin_width);
    assert!(s.omega_drift < 1e-3);
    assert!(r.rows.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn leaving_the_tube_stops_the_run_with_partial_output() {
    let mut cfg = small(Perturbation::None);
    let (s, _) = SimulationState::init(&cfg).unwrap();
    cfg.perturbation = Perturbation::Custom(s.psi.iter().map(|p| p * 0.6).collect());
    cfg.t_end = 10.0;
    let r = run_experiment(&cfg).unwrap();
    assert!(r.is_partial());
    assert!(r.error.as_deref().unwrap().contains("decomposition"));
}

#[test]
fn bad_configs_are_rejected() {
    let bad = [
        SimConfig { points: 1000, ..SimConfig::default() },
        SimConfig { dt: -0.1, ..SimConfig::default() },
        SimConfig { sample_every: 0.01, ..SimConfig::default() },
        SimConfig { perturbation: Perturbation::Custom(vec![Complex64::default(); 3]), ..SimConfig::default() },
    ];
    for c in bad {
        assert!(SimulationState::init(&c).is_err());
    }
}

#[test]
fn large_amplitude_warns() {
    let cfg = SimConfig { amplitude: 0.5, ..small(Perturbation::InternalMode) };
    let (s, _) = SimulationState::init(&cfg).unwrap();
    assert!(s.warnings.iter().any(|w| w.contains("stability")));
}
