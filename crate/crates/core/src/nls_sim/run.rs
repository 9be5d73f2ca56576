use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::decompose::{extract_b, modulation_decompose, ModeSnapshot};
use super::state::{matched_grid, SimulationState};
use super::SimConfig;
use crate::error::{Error, Result};
use crate::profile::solve_profile;
use crate::spectral::mode::{internal_mode_from, InternalMode, ModeOptions};
use crate::spectral::potentials::compute_potentials;

pub const CSV_HEADER: &str = "t,mass_drift,energy_drift,momentum,gamma,omega,b1,b2,abs_b,rho_v_norm,nu_v_norm";

/// Relative change of ω that triggers a new internal-mode solve.
const MODE_REFRESH: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub momentum: f64,
    pub gamma: f64,
    pub omega: f64,
    pub b1: f64,
    pub b2: f64,
    pub abs_b: f64,
    pub rho_v_norm: f64,
    pub nu_v_norm: f64,
}

impl DiagnosticsRow {
    pub fn csv_line(&self) -> String {
        [
            self.t,
            self.mass_drift,
            self.energy_drift,
            self.momentum,
            self.gamma,
            self.omega,
            self.b1,
            self.b2,
            self.abs_b,
            self.rho_v_norm,
            self.nu_v_norm,
        ]
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    /// Angular frequency of the largest non-constant peak of `|FFT b(t)|`.
    pub b_frequency: f64,
    /// The same peak measured on the clock `s = ∫ω dt`.
    pub b_frequency_rescaled: f64,
    /// `ω̄ λ` with `ω̄` the mean of `ω(t)` and λ from the last mode solve.
    pub predicted_frequency: f64,
    pub lambda: f64,
    /// Width of one FFT bin in t.
    pub bin_width: f64,
    pub bin_width_rescaled: f64,
    /// Mean `|b|` near `t_end/10` and over the last tenth of the run.
    pub envelope_early: f64,
    pub envelope_late: f64,
    /// Least-squares slope of `|b|` against t over the whole record.
    pub envelope_slope: f64,
    pub omega_drift: f64,
    pub max_mass_drift: f64,
    pub max_energy_drift: f64,
    pub max_abs_momentum: f64,
    pub mode_solves: usize,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct SimulationReport {
    pub rows: Vec<DiagnosticsRow>,
    pub summary: RunSummary,
    /// Set when the run stopped early; `rows` holds what was computed.
    pub error: Option<String>,
    pub warnings: Vec<String>,
}

impl SimulationReport {
    pub fn is_partial(&self) -> bool {
        self.error.is_some()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }
}

struct Tracker {
    mode: InternalMode,
    mode_omega: f64,
    solves: usize,
}

impl Tracker {
    fn refresh(&mut self, config: &SimConfig, omega: f64) -> Result<()> {
        if (omega - self.mode_omega).abs() / config.omega0 <= MODE_REFRESH {
            return Ok(());
        }
        self.mode = mode_at(config, omega)?;
        self.mode_omega = omega;
        self.solves += 1;
        Ok(())
    }
}

fn mode_at(config: &SimConfig, omega: f64) -> Result<InternalMode> {
    let grid = matched_grid(omega, config.domain_half, config.points);
    let profile = solve_profile(&config.model, omega, grid)?;
    let pot = compute_potentials(&config.model, &profile);
    internal_mode_from(profile, pot, ModeOptions::default())
}

fn weighted_norm(v: &[Complex64], ys: &[f64], scale: f64, h: f64) -> f64 {
    let s: f64 = v.iter().zip(ys).map(|(v, &y)| v.norm_sqr() / (scale * y).cosh().powi(2)).sum();
    (s * h).sqrt()
}

pub fn run_experiment(config: &SimConfig) -> Result<SimulationReport> {
    let (mut state, initial_mode) = SimulationState::init(config)?;
    let mode = match initial_mode {
        Some(m) => m,
        None => mode_at(config, config.omega0)?,
    };
    let alpha0 = mode.alpha;
    let mut tracker = Tracker { mode, mode_omega: config.omega0, solves: 1 };
    let mass0 = state.mass();
    let energy0 = state.energy();
    let per_sample = (config.sample_every / config.dt).round().max(1.0) as usize;
    let total = (config.t_end / config.dt).round() as usize;
    let mut rows = Vec::new();
    let mut clock = vec![0.0];
    let mut gamma = 0.0;
    let mut omega = config.omega0;
    let mut step = 0usize;
    let mut error = None;

    loop {
        match sample(&mut state, config, &mut tracker, gamma, omega, mass0, energy0, alpha0) {
            Ok(row) => {
                if let Some(prev) = rows.last() {
                    let prev: &DiagnosticsRow = prev;
                    let s_prev = *clock.last().expect("non-empty");
                    clock.push(s_prev + 0.5 * (prev.omega + row.omega) * (row.t - prev.t));
                }
                gamma = row.gamma;
                omega = row.omega;
                state.gamma = gamma;
                state.omega = omega;
                rows.push(row);
            }
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
        if step >= total {
            break;
        }
        let n = per_sample.min(total - step);
        let mut failed = None;
        for _ in 0..n {
            if let Err(e) = state.step(config.dt) {
                failed = Some(e);
                break;
            }
            step += 1;
        }
        if let Some(e) = failed {
            error = Some(e.to_string());
            break;
        }
        // warm start: γ advances at rate ω
        gamma += omega * n as f64 * config.dt;
    }
    let summary = summarize(&rows, &clock, config, &tracker, step);
    Ok(SimulationReport { rows, summary, error, warnings: state.warnings.clone() })
}

#[allow(clippy::too_many_arguments)]
fn sample(
    state: &mut SimulationState,
    config: &SimConfig,
    tracker: &mut Tracker,
    gamma: f64,
    omega: f64,
    mass0: f64,
    energy0: f64,
    alpha0: f64,
) -> Result<DiagnosticsRow> {
    let d = modulation_decompose(state, gamma, omega, config.domain_half)?;
    if (d.omega - config.omega0).abs() > 0.5 * config.omega0 {
        return Err(Error::DecompositionLost {
            t: state.t,
            reason: format!("omega = {} left the window |omega - omega0| <= omega0/2", d.omega),
        });
    }
    tracker.refresh(config, d.omega)?;
    let snap = ModeSnapshot::on_nodes(&tracker.mode, &d.family.y);
    let h = d.family.h();
    let (b, v) = extract_b(&d.u, &snap, h);
    let mass = state.mass();
    let energy = state.energy();
    let momentum = state.momentum();
    Ok(DiagnosticsRow {
        t: state.t,
        mass_drift: (mass - mass0) / mass0,
        energy_drift: (energy - energy0) / energy0.abs(),
        momentum,
        gamma: d.gamma,
        omega: d.omega,
        b1: b.re,
        b2: b.im,
        abs_b: b.norm(),
        rho_v_norm: weighted_norm(&v, &d.family.y, alpha0 / 10.0, h),
        nu_v_norm: weighted_norm(&v, &d.family.y, 0.1, h),
    })
}

/// Angular frequency of the dominant non-constant FFT peak and the bin width, for
/// samples with uniform spacing `spacing`.
fn dominant_frequency(b: &[Complex64], spacing: f64) -> (f64, f64) {
    let n = b.len();
    if n < 4 {
        return (0.0, 0.0);
    }
    let mut buf = b.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (mut best, mut arg) = (0.0, 1);
    for (k, v) in buf.iter().enumerate().skip(1) {
        if v.norm() > best {
            best = v.norm();
            arg = k;
        }
    }
    let signed = if arg <= n / 2 { arg as f64 } else { arg as f64 - n as f64 };
    let width = 2.0 * PI / (n as f64 * spacing);
    (signed.abs() * width, width)
}

/// Linear resampling of `b` onto a uniform grid of `clock`.
fn resample(clock: &[f64], b: &[Complex64]) -> (Vec<Complex64>, f64) {
    let n = clock.len();
    let end = clock[n - 1];
    let ds = end / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    let mut j = 0;
    for i in 0..n {
        let s = i as f64 * ds;
        while j + 2 < n && clock[j + 1] < s {
            j += 1;
        }
        let w = ((s - clock[j]) / (clock[j + 1] - clock[j])).clamp(0.0, 1.0);
        out.push(b[j] * (1.0 - w) + b[j + 1] * w);
    }
    (out, ds)
}

fn window_mean(rows: &[DiagnosticsRow], from: f64, to: f64) -> f64 {
    let v: Vec<f64> = rows.iter().filter(|r| r.t >= from && r.t <= to).map(|r| r.abs_b).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

fn summarize(rows: &[DiagnosticsRow], clock: &[f64], config: &SimConfig, tracker: &Tracker, steps: usize) -> RunSummary {
    let mut out = RunSummary { lambda: tracker.mode.lambda, mode_solves: tracker.solves, steps, ..Default::default() };
    if rows.len() < 2 {
        return out;
    }
    let b: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r.b1, r.b2)).collect();
    let dt = rows[1].t - rows[0].t;
    (out.b_frequency, out.bin_width) = dominant_frequency(&b, dt);
    if clock.len() == rows.len() {
        let (bs, ds) = resample(clock, &b);
        (out.b_frequency_rescaled, out.bin_width_rescaled) = dominant_frequency(&bs, ds);
    }
    let mean_omega = rows.iter().map(|r| r.omega).sum::<f64>() / rows.len() as f64;
    out.predicted_frequency = mean_omega * tracker.mode.lambda;
    let t_end = config.t_end;
    out.envelope_early = window_mean(rows, 0.05 * t_end, 0.15 * t_end);
    out.envelope_late = window_mean(rows, 0.9 * t_end, t_end);
    let n = rows.len() as f64;
    let tm = rows.iter().map(|r| r.t).sum::<f64>() / n;
    let am = rows.iter().map(|r| r.abs_b).sum::<f64>() / n;
    let sxy: f64 = rows.iter().map(|r| (r.t - tm) * (r.abs_b - am)).sum();
    let sxx: f64 = rows.iter().map(|r| (r.t - tm).powi(2)).sum();
    out.envelope_slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    for r in rows {
        out.omega_drift = out.omega_drift.max((r.omega - config.omega0).abs() / config.omega0);
        out.max_mass_drift = out.max_mass_drift.max(r.mass_drift.abs());
        out.max_energy_drift = out.max_energy_drift.max(r.energy_drift.abs());
        out.max_abs_momentum = out.max_abs_momentum.max(r.momentum.abs());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_of_a_pure_tone() {
        let dt = 0.5;
        let n = 512;
        let k = 23.0;
        let w = 2.0 * PI * k / (n as f64 * dt);
        let b: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(0.3, -w * j as f64 * dt) + 0.1).collect();
        let (f, width) = dominant_frequency(&b, dt);
        assert!((f - w).abs() < 1e-12);
        assert!((width - 2.0 * PI / (n as f64 * dt)).abs() < 1e-15);
    }

    #[test]
    fn resampling_a_linear_clock_is_exact() {
        let clock: Vec<f64> = (0..50).map(|j| 0.05 * j as f64).collect();
        let b: Vec<Complex64> = clock.iter().map(|&s| Complex64::new(s, 2.0 * s)).collect();
        let (r, ds) = resample(&clock, &b);
        assert!((ds - 0.05).abs() < 1e-15);
        for (x, y) in r.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn csv_line_has_every_column() {
        let row = DiagnosticsRow {
            t: 1.0,
            mass_drift: 0.0,
            energy_drift: 0.0,
            momentum: 0.0,
            gamma: 0.1,
            omega: 0.05,
            b1: 0.0,
            b2: 0.0,
            abs_b: 0.0,
            rho_v_norm: 0.0,
            nu_v_norm: 0.0,
        };
        assert_eq!(row.csv_line().split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.csv_line().starts_with("1.0000000000000000e0,"));
    }
}
