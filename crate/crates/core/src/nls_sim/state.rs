use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Perturbation, SimConfig};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::profile::solve_profile;
use crate::spectral::mode::{internal_mode_from, InternalMode, ModeOptions};
use crate::spectral::potentials::compute_potentials;
use crate::NonlinearityModel;

/// Field on the periodic grid `x_j = -X + j dx`, `j = 0..m`.
pub struct SimulationState {
    pub model: NonlinearityModel,
    pub x: Vec<f64>,
    pub dx: f64,
    pub psi: Vec<Complex64>,
    pub t: f64,
    pub gamma: f64,
    pub omega: f64,
    pub warnings: Vec<String>,
    k: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    half_step: Option<(f64, Vec<Complex64>)>,
    absorber: Option<Vec<f64>>,
}

impl std::fmt::Debug for SimulationState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimulationState")
            .field("t", &self.t)
            .field("gamma", &self.gamma)
            .field("omega", &self.omega)
            .field("points", &self.psi.len())
            .finish()
    }
}

/// y-grid whose nodes are `√ω` times the x-nodes.
pub(super) fn matched_grid(omega: f64, domain_half: f64, points: usize) -> Grid {
    Grid::new(omega.sqrt() * domain_half, points / 2)
}

impl SimulationState {
    /// Build the initial state. For an internal-mode perturbation the mode at
    /// `ω₀` is returned as well.
    pub fn init(config: &SimConfig) -> Result<(Self, Option<InternalMode>)> {
        config.validate()?;
        let m = config.points;
        let big_x = config.domain_half;
        let dx = 2.0 * big_x / m as f64;
        let x: Vec<f64> = (0..m).map(|j| -big_x + j as f64 * dx).collect();
        let w0 = config.omega0;
        let grid = matched_grid(w0, big_x, m);
        let profile = solve_profile(&config.model, w0, grid)?;
        let sw = w0.sqrt();
        let mut psi: Vec<Complex64> = (0..m).map(|j| Complex64::new(sw * profile.q[j], 0.0)).collect();
        let mut warnings = Vec::new();
        if config.amplitude > 0.1 * sw {
            warnings.push(format!(
                "amplitude {} is not small compared with sqrt(omega0) = {sw}; outside the stability regime",
                config.amplitude
            ));
        }
        let mut mode = None;
        match &config.perturbation {
            Perturbation::None => {}
            Perturbation::InternalMode => {
                let pot = compute_potentials(&config.model, &profile);
                let md = internal_mode_from(profile, pot, ModeOptions::default())?;
                for (j, p) in psi.iter_mut().enumerate() {
                    *p += Complex64::new(md.v1[j], md.v2[j]) * (config.amplitude * sw);
                }
                mode = Some(md);
            }
            Perturbation::Custom(v) => {
                for (j, p) in psi.iter_mut().enumerate() {
                    *p += v[j];
                }
            }
        }
        let dk = 2.0 * PI / (2.0 * big_x);
        let k: Vec<f64> = (0..m)
            .map(|j| {
                if j < m / 2 {
                    j as f64 * dk
                } else if j == m / 2 {
                    0.0
                } else {
                    (j as f64 - m as f64) * dk
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        let absorber = config.absorbing_mask.then(|| {
            x.iter()
                .map(|&xv| {
                    let edge = (xv.abs() - 0.8 * big_x) / (0.2 * big_x);
                    if edge > 0.0 {
                        0.05 * edge * edge
                    } else {
                        0.0
                    }
                })
                .collect()
        });
        if config.absorbing_mask {
            warnings.push("absorbing mask near the domain edges is on".into());
        }
        let state = Self {
            model: config.model.clone(),
            x,
            dx,
            psi,
            t: 0.0,
            gamma: 0.0,
            omega: w0,
            warnings,
            k,
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            half_step: None,
            absorber,
        };
        Ok((state, mode))
    }

    /// Wavenumbers; the Nyquist entry is set to zero.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    fn forward(&mut self, buf: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, &mut self.scratch);
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inv.process_with_scratch(buf, &mut self.scratch);
        let s = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    }

    /// Spectral `∂_x ψ`.
    pub fn derivative(&mut self) -> Vec<Complex64> {
        let mut buf = self.psi.clone();
        self.forward(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.k) {
            *b *= Complex64::new(0.0, k);
        }
        self.inverse(&mut buf);
        buf
    }

    fn nonlinear_phase(&self, s: f64) -> f64 {
        s + self.model.power_sum(s, 0.0, |a, _| a)
    }

    /// One Strang step: half linear, full nonlinear, half linear.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let stale = self.half_step.as_ref().is_none_or(|(d, _)| *d != dt);
        if stale {
            let m = self.k.len();
            // the Nyquist mode propagates with its true wavenumber
            let kn = PI / self.dx;
            let f = (0..m)
                .map(|j| {
                    let k = if j == m / 2 { kn } else { self.k[j] };
                    Complex64::from_polar(1.0, -k * k * dt / 2.0)
                })
                .collect();
            self.half_step = Some((dt, f));
        }
        let mut buf = std::mem::take(&mut self.psi);
        let half = self.half_step.take().expect("set above");
        self.forward(&mut buf);
        buf.iter_mut().zip(&half.1).for_each(|(b, f)| *b *= f);
        self.inverse(&mut buf);
        for v in buf.iter_mut() {
            let s = v.norm_sqr();
            *v *= Complex64::from_polar(1.0, dt * self.nonlinear_phase(s));
        }
        self.forward(&mut buf);
        buf.iter_mut().zip(&half.1).for_each(|(b, f)| *b *= f);
        self.inverse(&mut buf);
        if let Some(eta) = &self.absorber {
            buf.iter_mut().zip(eta).for_each(|(b, e)| *b *= (-dt * e).exp());
        }
        self.half_step = Some(half);
        self.t += dt;
        if buf.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            self.psi = buf;
            return Err(Error::BlowUp { t: self.t });
        }
        self.psi = buf;
        Ok(())
    }

    pub fn mass(&self) -> f64 {
        self.psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dx
    }

    /// `∫ ½|ψ_x|² − |ψ|⁴/4 − G(|ψ|²)/2`.
    pub fn energy(&mut self) -> f64 {
        let d = self.derivative();
        let mut e = 0.0;
        for (p, dp) in self.psi.iter().zip(&d) {
            let s = p.norm_sqr();
            e += 0.5 * dp.norm_sqr() - 0.25 * s * s - 0.5 * self.model.antiderivative(s);
        }
        e * self.dx
    }

    /// `Im ∫ ψ conj(ψ_x)`.
    pub fn momentum(&mut self) -> f64 {
        let d = self.derivative();
        self.psi.iter().zip(&d).map(|(p, dp)| (p * dp.conj()).im).sum::<f64>() * self.dx
    }
}
