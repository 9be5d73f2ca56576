use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use nlsmode::fgr::{gamma0 as gamma0_at, gamma0_scan, gamma_general};
use nlsmode::nls_sim::{run_experiment, Perturbation, SimConfig, CSV_HEADER};
use nlsmode::profile::solve_profile;
use nlsmode::spectral::{fd_mode_oracle, solve_internal_mode, transformed_potentials};
use nlsmode::validate::{run_all, ValidationConfig, FULL, QUICK};
use nlsmode::{Grid, NonlinearityModel};

use crate::config::{positive, CliError, FileValues};
use crate::{Common, GridArgs, Level, ModelArgs};

type CliResult = Result<(), CliError>;

const MODEL_KEYS: [&str; 3] = ["model", "sigma", "a"];
const GRID_KEYS: [&str; 2] = ["half_length", "nodes"];

fn keys(extra: &[&'static str], model: bool, grid: bool) -> Vec<&'static str> {
    let mut k = extra.to_vec();
    if model {
        k.extend(MODEL_KEYS);
    }
    if grid {
        k.extend(GRID_KEYS);
    }
    k
}

fn model_from(file: &FileValues, m: &ModelArgs) -> Result<(NonlinearityModel, Value), CliError> {
    let kind = file.pick("model", m.model.clone(), "power".to_string())?;
    match kind.as_str() {
        "zero" => Ok((NonlinearityModel::Zero, json!({"model": "zero"}))),
        "power" => {
            let sigma = file.pick("sigma", m.sigma, 2.0)?;
            let a = file.pick("a", m.a, 1.0)?;
            let model = NonlinearityModel::power(a, sigma)?;
            Ok((model, json!({"model": "power", "sigma": sigma, "a": a})))
        }
        other => Err(CliError::Usage(format!("unknown model `{other}` (expected power or zero)"))),
    }
}

fn grid_from(file: &FileValues, g: &GridArgs) -> Result<(Grid, Value), CliError> {
    let d = Grid::default();
    let l = positive("half_length", file.pick("half_length", g.half_length, d.half_length)?)?;
    let n = file.pick("nodes", g.nodes, d.n)?;
    if n < 8 {
        return Err(CliError::Usage(format!("`nodes` must be at least 8, got {n}")));
    }
    Ok((Grid::new(l, n), json!({"half_length": l, "nodes": n})))
}

fn merge(parts: &[Value]) -> Value {
    let mut out = serde_json::Map::new();
    for p in parts {
        if let Value::Object(m) = p {
            out.extend(m.clone());
        }
    }
    Value::Object(out)
}

fn emit(record: &Value) {
    println!("{}", serde_json::to_string_pretty(record).expect("records serialize"));
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(path: &Path, header: &str, columns: &[&[f64]]) -> CliResult {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut lines = String::with_capacity(rows * columns.len() * 24);
    lines.push_str(header);
    lines.push('\n');
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt(c[i])).collect();
        lines.push_str(&row.join(","));
        lines.push('\n');
    }
    write_text(path, &lines)
}

fn write_text(path: &Path, text: &str) -> CliResult {
    let io = |e: std::io::Error| CliError::Compute(format!("cannot write {}: {e}", path.display()));
    let mut f = BufWriter::new(File::create(path).map_err(io)?);
    f.write_all(text.as_bytes()).map_err(io)?;
    f.flush().map_err(io)
}

pub fn profile(common: &Common, m: &ModelArgs, g: &GridArgs, omega: Option<f64>) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["omega"], true, true))?;
    let (model, model_echo) = model_from(&file, m)?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let omega = positive("omega", file.require("omega", omega)?)?;
    let p = solve_profile(&model, omega, grid)?;
    let fi = p.first_integral_residual().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if let Some(out) = &common.out {
        write_csv(out, "y,Q,Qp,Qpp", &[&grid.nodes(), &p.q, &p.qp, &p.qpp])?;
    }
    emit(&json!({
        "command": "profile",
        "inputs": merge(&[model_echo, grid_echo, json!({"omega": omega})]),
        "q0": p.q0,
        "first_integral_residual": fi,
        "eps_omega": model.epsilon(omega),
    }));
    Ok(())
}

pub fn mode(common: &Common, m: &ModelArgs, g: &GridArgs, omega: Option<f64>) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["omega"], true, true))?;
    let (model, model_echo) = model_from(&file, m)?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let omega = positive("omega", file.require("omega", omega)?)?;
    let md = solve_internal_mode(&model, omega, grid)?;
    let tp = transformed_potentials(&md)?;
    let (r_plus, r_minus) = md.eigen_residuals();
    let (oracle_lambda, oracle_error) = match fd_mode_oracle(&md.profile, &md.potentials) {
        Ok(o) => (json!(o.lambda), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    if let Some(out) = &common.out {
        write_csv(
            out,
            "y,W1,W2,V1,V2,K0,K1,K2,Y0,Y1",
            &[&grid.nodes(), &md.w1, &md.w2, &md.v1, &md.v2, &tp.k0, &tp.k1, &tp.k2, &tp.y0, &tp.y1],
        )?;
    }
    let p = &md.potentials;
    emit(&json!({
        "command": "mode",
        "inputs": merge(&[model_echo, grid_echo, json!({"omega": omega})]),
        "omega": omega,
        "alpha": md.alpha,
        "lambda": md.lambda,
        "I_omega": p.i_omega,
        "I_omega_error": p.i_omega_err,
        "eps_omega": p.eps_omega,
        "rho_omega": p.rho_omega,
        "residual_Lplus": r_plus,
        "residual_Lminus": r_minus,
        "int_Y0": tp.int_y0,
        "oracle_lambda": oracle_lambda,
        "oracle_error": oracle_error,
        "root_residual": md.root_residual,
    }));
    Ok(())
}

pub fn gamma0(common: &Common, sigma: Option<f64>, g: &GridArgs) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["sigma"], false, true))?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let sigma = file.require("sigma", sigma)?;
    if !(sigma >= 1.0) {
        return Err(CliError::Usage(format!("`sigma` must be at least 1, got {sigma}")));
    }
    let r = gamma0_at(sigma, grid);
    if let Some(out) = &common.out {
        write_csv(
            out,
            "y,A,D0,T1,T2,Delta2,Delta4,Delta5",
            &[&grid.nodes(), &r.a, &r.d0, &r.t1, &r.t2, &r.delta2, &r.delta4, &r.delta5],
        )?;
    }
    emit(&json!({
        "command": "fgr gamma0",
        "inputs": merge(&[grid_echo, json!({"sigma": sigma})]),
        "gamma0": r.gamma0,
        "error_estimate": r.error_estimate,
    }));
    Ok(())
}

pub fn scan(
    common: &Common,
    from: Option<f64>,
    to: Option<f64>,
    points: Option<usize>,
    g: &GridArgs,
    jobs: Option<usize>,
) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["from", "to", "points"], false, true))?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let from = file.require("from", from)?;
    let to = file.require("to", to)?;
    let points = file.require("points", points)?;
    if !(from >= 1.0 && to >= from) || points == 0 {
        return Err(CliError::Usage(format!("need 1 <= from <= to and points > 0, got {from}, {to}, {points}")));
    }
    let rows = gamma0_scan(from, to, points, grid, jobs.unwrap_or(1));
    let sig: Vec<f64> = rows.iter().map(|r| r.sigma).collect();
    let val: Vec<f64> = rows.iter().map(|r| r.gamma0).collect();
    let err: Vec<f64> = rows.iter().map(|r| r.error_estimate).collect();
    if let Some(out) = &common.out {
        write_csv(out, "sigma,gamma0,err", &[&sig, &val, &err])?;
    }
    let min = val.iter().cloned().fold(f64::INFINITY, f64::min);
    emit(&json!({
        "command": "fgr scan",
        "inputs": merge(&[grid_echo, json!({"from": from, "to": to, "points": points})]),
        "all_positive": val.iter().all(|&v| v > 0.0),
        "minimum": min,
        "max_error_estimate": err.iter().cloned().fold(0.0, f64::max),
    }));
    Ok(())
}

pub fn general(common: &Common, m: &ModelArgs, g: &GridArgs, omega: Option<f64>) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["omega"], true, true))?;
    let (model, model_echo) = model_from(&file, m)?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let omega = positive("omega", file.require("omega", omega)?)?;
    let r = gamma_general(&model, omega, grid)?;
    let o = &r.orthogonality;
    emit(&json!({
        "command": "fgr general",
        "inputs": merge(&[model_echo, grid_echo, json!({"omega": omega})]),
        "gamma": r.gamma,
        "gamma_unprojected": r.gamma_unprojected,
        "h3_holds": r.h3_holds,
        "orthogonality": {
            "g1_q": o.g1_q,
            "g2_lambda_q": o.g2_lambda_q,
            "g1_v2": o.g1_v2,
            "g2_v1": o.g2_v1,
        },
    }));
    Ok(())
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the diagnostics CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    /// `none` or `internal_mode`.
    #[arg(long)]
    pub perturbation: Option<String>,
    /// Defaults to 0.02 sqrt(omega0).
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub sample_every: Option<f64>,
    #[arg(long)]
    pub domain_half: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub absorbing_mask: Option<bool>,
}

const SIM_KEYS: [&str; 11] = [
    "sigma",
    "a",
    "omega0",
    "perturbation",
    "amplitude",
    "dt",
    "t_end",
    "sample_every",
    "domain_half",
    "points",
    "absorbing_mask",
];

pub fn simulate(s: &SimulateArgs) -> CliResult {
    let file = FileValues::load(s.config.as_deref(), &SIM_KEYS)?;
    let d = SimConfig::default();
    let sigma = file.pick("sigma", s.sigma, 2.0)?;
    let a = file.pick("a", s.a, 1.0)?;
    let omega0 = file.pick("omega0", s.omega0, d.omega0)?;
    let perturbation = match file.pick("perturbation", s.perturbation.clone(), "internal_mode".into())?.as_str() {
        "none" => Perturbation::None,
        "internal_mode" => Perturbation::InternalMode,
        other => return Err(CliError::Usage(format!("unknown perturbation `{other}` (none or internal_mode)"))),
    };
    let config = SimConfig {
        model: NonlinearityModel::power(a, sigma)?,
        omega0,
        amplitude: file.pick("amplitude", s.amplitude, 0.02 * omega0.abs().sqrt())?,
        dt: file.pick("dt", s.dt, d.dt)?,
        t_end: file.pick("t_end", s.t_end, d.t_end)?,
        sample_every: file.pick("sample_every", s.sample_every, d.sample_every)?,
        domain_half: file.pick("domain_half", s.domain_half, d.domain_half)?,
        points: file.pick("points", s.points, d.points)?,
        absorbing_mask: file.pick("absorbing_mask", s.absorbing_mask, false)?,
        perturbation,
    };
    config.validate()?;
    let report = run_experiment(&config)?;
    if let Some(out) = &s.out {
        write_text(out, &report.to_csv())?;
    }
    let sm = &report.summary;
    emit(&json!({
        "command": "simulate",
        "inputs": {
            "sigma": sigma, "a": a, "omega0": config.omega0,
            "perturbation": if config.perturbation == Perturbation::None { "none" } else { "internal_mode" },
            "amplitude": config.amplitude, "dt": config.dt, "t_end": config.t_end,
            "sample_every": config.sample_every, "domain_half": config.domain_half,
            "points": config.points, "absorbing_mask": config.absorbing_mask,
        },
        "csv_header": CSV_HEADER,
        "rows": report.rows.len(),
        "partial": report.is_partial(),
        "error": report.error,
        "warnings": report.warnings,
        "b_frequency": sm.b_frequency,
        "b_frequency_rescaled_clock": sm.b_frequency_rescaled,
        "predicted_frequency": sm.predicted_frequency,
        "lambda": sm.lambda,
        "bin_width": sm.bin_width,
        "bin_width_rescaled_clock": sm.bin_width_rescaled,
        "envelope_early": sm.envelope_early,
        "envelope_late": sm.envelope_late,
        "envelope_slope": sm.envelope_slope,
        "omega_drift": sm.omega_drift,
        "max_mass_drift": sm.max_mass_drift,
        "max_energy_drift": sm.max_energy_drift,
        "max_abs_momentum": sm.max_abs_momentum,
        "mode_solves": sm.mode_solves,
        "steps": sm.steps,
    }));
    match report.error {
        Some(e) => Err(CliError::Compute(format!("run stopped early (partial output written): {e}"))),
        None => Ok(()),
    }
}

pub fn validate(level: Level, common: &Common, g: &GridArgs, jobs: Option<usize>) -> CliResult {
    let file = FileValues::load(common.config.as_deref(), &keys(&["jobs"], false, true))?;
    let (grid, grid_echo) = grid_from(&file, g)?;
    let jobs = file.pick("jobs", jobs, 1)?;
    let ids: &[u8] = match level {
        Level::Quick => &QUICK,
        Level::Full => &FULL,
    };
    let cfg = ValidationConfig { grid, jobs };
    let mut reports = Vec::new();
    for &id in ids {
        let r = run_all(&[id], &cfg).remove(0);
        println!("{r}");
        reports.push(r);
    }
    if let Some(out) = &common.out {
        let record = json!({
            "command": "validate",
            "inputs": merge(&[grid_echo, json!({"level": format!("{level:?}").to_lowercase(), "jobs": jobs})]),
            "criteria": reports.iter().map(|r| json!({
                "id": r.id,
                "title": r.title,
                "measured": r.measured,
                "bound": r.bound,
                "passed": r.passed,
                "detail": r.detail,
            })).collect::<Vec<_>>(),
        });
        write_text(out, &serde_json::to_string_pretty(&record).expect("records serialize"))?;
    }
    let failing: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| format!("{} ({})", r.id, r.title)).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Compute(format!("failing criteria: {}", failing.join(", "))))
    }
}
