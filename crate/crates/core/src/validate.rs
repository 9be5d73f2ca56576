//! The acceptance checks, each reporting a measured value against its bound.

use std::fmt;
use std::time::Instant;

use crate::error::Result;
use crate::fgr::gamma0::{gamma0_slope_at_one, gamma0_two_exact};
use crate::fgr::moments::{moment_table, recurrence_residuals};
use crate::fgr::{gamma0, gamma0_scan, gamma_general};
use crate::nls_sim::{run_experiment, Perturbation, SimConfig, SimulationState};
use crate::profile::solve_profile;
use crate::spectral::operators::{factorization_residuals, TestFunction};
use crate::spectral::{compute_potentials, fd_mode_oracle, solve_internal_mode, transformed_potentials};
use crate::{Grid, NonlinearityModel};

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    /// The quantity compared against `bound` (an error, a residual, ...).
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: measured {:.6e}, bound {:.6e}; {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.measured,
            self.bound,
            self.detail
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationConfig {
    pub grid: Grid,
    pub jobs: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { grid: Grid::default(), jobs: 1 }
    }
}

pub const QUICK: [u8; 7] = [1, 2, 3, 4, 7, 8, 9];
pub const FULL: [u8; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];

const TITLES: [&str; 12] = [
    "Gamma0(2) closed form",
    "Gamma0(1) and moment combination vanish",
    "slope of Gamma0 at sigma = 1",
    "Gamma0 positive on [1.01, 8]",
    "alpha(omega) ~ 8 omega / 9",
    "Birman-Schwinger vs finite-difference eigenvalue",
    "integral of Y0 ~ 4 alpha",
    "orthogonality of (g1, g2)",
    "eigen and factorization residuals",
    "Gamma(omega)/omega -> Gamma0(2)",
    "simulator conservation, b-frequency, damping trend",
    "h2 ratio = 1/(2 rho)",
];

fn report(id: u8, measured: f64, bound: f64, passed: bool, detail: String) -> CriterionReport {
    CriterionReport { id, title: TITLES[id as usize - 1], measured, bound, passed, detail }
}

fn failed(id: u8, bound: f64, err: impl fmt::Display) -> CriterionReport {
    report(id, f64::NAN, bound, false, format!("computation failed: {err}"))
}

fn power(sigma: f64) -> NonlinearityModel {
    NonlinearityModel::Power { a: 1.0, sigma }
}

/// `ϱ_ω = 10.125 ω` for `g = s²`.
pub fn rho_square(omega: f64) -> f64 {
    10.125 * omega
}

pub fn run(id: u8, cfg: &ValidationConfig) -> CriterionReport {
    match id {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        9 => criterion_9(cfg),
        10 => criterion_10(cfg),
        11 => criterion_11(),
        12 => criterion_12(cfg),
        _ => report(id.clamp(1, 12), f64::NAN, f64::NAN, false, format!("no criterion {id}")),
    }
}

pub fn run_all(ids: &[u8], cfg: &ValidationConfig) -> Vec<CriterionReport> {
    ids.iter().map(|&id| run(id, cfg)).collect()
}

pub fn criterion_1(cfg: &ValidationConfig) -> CriterionReport {
    let start = Instant::now();
    let r = gamma0(2.0, cfg.grid);
    let secs = start.elapsed().as_secs_f64();
    let err = (r.gamma0 - gamma0_two_exact()).abs();
    report(
        1,
        err,
        1e-3,
        err <= 1e-3 && secs <= 60.0,
        format!("Gamma0(2) = {:.12}, exact {:.12}, estimate {:.2e}, {secs:.2} s", r.gamma0, gamma0_two_exact(), r.error_estimate),
    )
}

pub fn criterion_2(cfg: &ValidationConfig) -> CriterionReport {
    let r = gamma0(1.0, cfg.grid);
    let comb = recurrence_residuals(&moment_table(cfg.grid)).combination;
    let ok = r.gamma0.abs() <= 1e-6 && comb.abs() <= 1e-8;
    report(2, r.gamma0.abs(), 1e-6, ok, format!("moment combination {comb:.3e} (bound 1e-8)"))
}

pub fn criterion_3(cfg: &ValidationConfig) -> CriterionReport {
    let step = 1e-3;
    let slope = (gamma0(1.0 + step, cfg.grid).gamma0 - gamma0(1.0, cfg.grid).gamma0) / step;
    let exact = gamma0_slope_at_one();
    let rel = (slope - exact).abs() / exact;
    report(3, rel, 1e-2, rel <= 1e-2, format!("slope {slope:.6}, exact {exact:.6}"))
}

pub fn criterion_4(cfg: &ValidationConfig) -> CriterionReport {
    let scan = gamma0_scan(1.01, 8.0, 100, cfg.grid, cfg.jobs);
    let worst = scan.iter().min_by(|a, b| a.gamma0.total_cmp(&b.gamma0)).expect("100 points");
    let all = scan.iter().all(|r| r.gamma0 > 0.0);
    report(4, worst.gamma0, 0.0, all, format!("minimum at sigma = {:.4}", worst.sigma))
}

fn alpha_deviation(grid: Grid, omega: f64) -> Result<f64> {
    let mode = solve_internal_mode(&power(2.0), omega, grid)?;
    Ok(mode.alpha * 9.0 / (8.0 * omega) - 1.0)
}

pub fn criterion_5(cfg: &ValidationConfig) -> CriterionReport {
    let (d2, d3) = match (alpha_deviation(cfg.grid, 1e-2), alpha_deviation(cfg.grid, 1e-3)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return failed(5, 15.0 * rho_square(1e-2), e),
    };
    let shrink = d2.abs() / d3.abs();
    let in_band = d2.abs() <= 15.0 * rho_square(1e-2) && d3.abs() <= 15.0 * rho_square(1e-3);
    let ok = in_band && (5.0..=20.0).contains(&shrink);
    report(
        5,
        d3.abs(),
        15.0 * rho_square(1e-3),
        ok,
        format!("deviation {d2:.4e} at 1e-2, {d3:.4e} at 1e-3, shrink factor {shrink:.3} (allowed 5..20)"),
    )
}

pub fn criterion_6(cfg: &ValidationConfig) -> CriterionReport {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for sigma in [1.5, 2.0, 3.0] {
        let mode = match solve_internal_mode(&power(sigma), 1e-2, cfg.grid) {
            Ok(m) => m,
            Err(e) => return failed(6, 1e-4, e),
        };
        let oracle = match fd_mode_oracle(&mode.profile, &mode.potentials) {
            Ok(o) => o,
            Err(e) => return failed(6, 1e-4, e),
        };
        let rel = (oracle.lambda - mode.lambda).abs() / mode.lambda;
        worst = worst.max(rel);
        parts.push(format!("sigma {sigma}: {rel:.2e}"));
    }
    report(6, worst, 1e-4, worst <= 1e-4, parts.join(", "))
}

pub fn criterion_7(cfg: &ValidationConfig) -> CriterionReport {
    let mut ok = true;
    let mut worst = 0.0;
    let mut parts = Vec::new();
    for omega in [1e-2, 1e-3] {
        let r = solve_internal_mode(&power(2.0), omega, cfg.grid).and_then(|m| Ok((transformed_potentials(&m)?, m.alpha)));
        let (tp, alpha) = match r {
            Ok(v) => v,
            Err(e) => return failed(7, 15.0 * rho_square(omega), e),
        };
        let dev = (tp.int_y0 / (4.0 * alpha) - 1.0).abs();
        ok &= dev <= 15.0 * rho_square(omega);
        if omega == 1e-3 {
            worst = dev;
        }
        parts.push(format!("omega {omega:e}: {dev:.3e} (bound {:.3e})", 15.0 * rho_square(omega)));
    }
    report(7, worst, 15.0 * rho_square(1e-3), ok, parts.join(", "))
}

pub fn criterion_8(cfg: &ValidationConfig) -> CriterionReport {
    match gamma_general(&power(2.0), 1e-2, cfg.grid) {
        Ok(g) => {
            let o = &g.orthogonality;
            let m = o.max();
            report(
                8,
                m,
                1e-6,
                m <= 1e-6,
                format!(
                    "<g1,Q> {:.2e}, <g2,LQ> {:.2e}, <g1,V2> {:.2e}, <g2,V1> {:.2e}",
                    o.g1_q, o.g2_lambda_q, o.g1_v2, o.g2_v1
                ),
            )
        }
        Err(e) => failed(8, 1e-6, e),
    }
}

pub fn criterion_9(cfg: &ValidationConfig) -> CriterionReport {
    let mode = match solve_internal_mode(&power(2.0), 1e-2, cfg.grid) {
        Ok(m) => m,
        Err(e) => return failed(9, 1e-6, e),
    };
    let (e1, e2) = mode.eigen_residuals();
    let fact = factorization_residuals(&mode, &TestFunction::random_set(5, 11));
    let f_max = fact.iter().map(|&(a, b)| a.max(b)).fold(0.0, f64::max);
    let eig = e1.max(e2);
    report(
        9,
        eig,
        1e-6,
        eig <= 1e-6 && f_max <= 1e-4,
        format!("eigen ({e1:.2e}, {e2:.2e}); worst factorization residual {f_max:.2e} (bound 1e-4)"),
    )
}

/// Values of `Γ(ω)/ω` for `σ = 2` at `ω = 10⁻², 10⁻³` and `Γ₀(2)`.
pub fn gamma_convergence(cfg: &ValidationConfig) -> Result<(f64, f64, f64)> {
    let a = gamma_general(&power(2.0), 1e-2, cfg.grid)?.gamma / 1e-2;
    let b = gamma_general(&power(2.0), 1e-3, cfg.grid)?.gamma / 1e-3;
    Ok((a, b, gamma0(2.0, cfg.grid).gamma0))
}

/// Both parts are reported: the error ratio between the two ω values and
/// whether the two values sit on opposite sides of `Γ₀(2)`.
pub fn criterion_10(cfg: &ValidationConfig) -> CriterionReport {
    let (a, b, g0) = match gamma_convergence(cfg) {
        Ok(v) => v,
        Err(e) => return failed(10, f64::NAN, e),
    };
    let ratio = (a - g0).abs() / (b - g0).abs();
    let brackets = (a - g0) * (b - g0) < 0.0;
    let rate_ok = (5.0..=20.0).contains(&ratio);
    report(
        10,
        ratio,
        10.0,
        rate_ok && brackets,
        format!(
            "Gamma/omega = {a:.8} at 1e-2, {b:.8} at 1e-3, Gamma0(2) = {g0:.8}; error ratio {ratio:.3} ({}), bracket {}",
            if rate_ok { "within 5..20" } else { "outside 5..20" },
            if brackets { "holds" } else { "does not hold: both values lie on the same side" }
        ),
    )
}

/// Parts of the simulator check, kept separate so each can be asserted.
#[derive(Clone, Debug)]
pub struct SimulatorCheck {
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub b_frequency: f64,
    pub predicted_frequency: f64,
    pub bin_width: f64,
    pub envelope_early: f64,
    pub envelope_late: f64,
}

impl SimulatorCheck {
    pub fn conservation_ok(&self) -> bool {
        self.mass_drift <= 1e-10 && self.energy_drift <= 1e-6
    }

    pub fn frequency_ok(&self) -> bool {
        (self.b_frequency - self.predicted_frequency).abs() <= self.bin_width
    }

    pub fn damping_ok(&self) -> bool {
        self.envelope_late < self.envelope_early
    }
}

/// Exact soliton over 10⁴ steps, then the default internal-mode run.
pub fn simulator_check(config: &SimConfig) -> Result<SimulatorCheck> {
    let exact = SimConfig { perturbation: Perturbation::None, ..config.clone() };
    let (mut state, _) = SimulationState::init(&exact)?;
    let (m0, e0) = (state.mass(), state.energy());
    for _ in 0..10_000 {
        state.step(exact.dt)?;
    }
    let mass_drift = ((state.mass() - m0) / m0).abs();
    let energy_drift = ((state.energy() - e0) / e0).abs();
    let run = run_experiment(config)?;
    if let Some(e) = run.error {
        return Err(crate::Error::Config(format!("simulation stopped early: {e}")));
    }
    let s = run.summary;
    Ok(SimulatorCheck {
        mass_drift,
        energy_drift,
        b_frequency: s.b_frequency,
        predicted_frequency: s.predicted_frequency,
        bin_width: s.bin_width,
        envelope_early: s.envelope_early,
        envelope_late: s.envelope_late,
    })
}

pub fn criterion_11() -> CriterionReport {
    match simulator_check(&SimConfig::default()) {
        Ok(c) => report(
            11,
            c.energy_drift,
            1e-6,
            c.conservation_ok() && c.frequency_ok() && c.damping_ok(),
            format!(
                "mass drift {:.2e} (bound 1e-10); b-frequency {:.6} vs omega*lambda {:.6}, bin {:.6}; |b| envelope {:.8e} near t=200, {:.8e} at t_end",
                c.mass_drift, c.b_frequency, c.predicted_frequency, c.bin_width, c.envelope_early, c.envelope_late
            ),
        ),
        Err(e) => failed(11, 1e-6, e),
    }
}

pub fn criterion_12(cfg: &ValidationConfig) -> CriterionReport {
    let mut worst: f64 = 0.0;
    for sigma in [1.5, 2.0, 3.0] {
        for omega in [1e-2, 1e-3] {
            let model = power(sigma);
            let profile = match solve_profile(&model, omega, cfg.grid) {
                Ok(p) => p,
                Err(e) => return failed(12, 1e-6, e),
            };
            let pot = compute_potentials(&model, &profile);
            let ratio = model.h2_ratio(&profile);
            let expected = 1.0 / (2.0 * pot.rho_omega);
            worst = worst.max((ratio - expected).abs() / expected);
        }
    }
    report(12, worst, 1e-6, worst <= 1e-6, "worst over sigma in {1.5, 2, 3}, omega in {1e-2, 1e-3}".into())
}
