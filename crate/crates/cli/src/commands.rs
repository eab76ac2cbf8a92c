//! One function per subcommand.

use std::fmt::Write as _;
use std::path::Path;

use chland::field::{
    droplet, energy_gap, nu, path_point, read_field, validate_cells, write_field, PathSpec, DEFAULT_CUTOFF,
};
use chland::limit_model::{critical_constants, solve_extrema, Extrema, LimitParams};
use chland::optimize::{
    barrier_sweep, cold_start, constrained_minimize, local_minimize_ball, omega_grid, MinimizeConfig, SweepMode,
};
use chland::shape::shape_report;
use chland::steiner::{energy_decrease_report, steiner_symmetrize};
use chland::{Field, ModelParams};

use crate::config::RunConfig;
use crate::error::CliError;

/// Whether the numerical work reached its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotConverged,
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn save_field(path: Option<&Path>, f: &Field) -> Result<(), CliError> {
    if let Some(p) = path {
        write_field(p, f).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn model(cfg: &RunConfig) -> Result<ModelParams, CliError> {
    let p = ModelParams::new(cfg.d, cfg.xi, cfg.phi)?;
    validate_cells(cfg.n)?;
    Ok(p)
}

fn extrema(p: &ModelParams) -> Result<Extrema, CliError> {
    solve_extrema(&p.limit())
        .extrema
        .ok_or_else(|| CliError::Config(format!("f_xi has no positive extrema at xi = {}", p.xi())))
}

fn minimize_config(cfg: &RunConfig) -> Result<MinimizeConfig, CliError> {
    let mut m = MinimizeConfig { seed: cfg.seed, ..Default::default() };
    if let Some(k) = cfg.max_iter {
        m.max_iter = k;
    }
    if let Some(t) = cfg.grad_tol {
        m.grad_tol = t;
    }
    m.validate()?;
    Ok(m)
}

fn outcome(converged: bool) -> Outcome {
    if converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    }
}

pub fn constants(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let lp = LimitParams::new(cfg.d, cfg.xi)?;
    let land = solve_extrema(&lp);
    let (xi_tilde, xi_d) = critical_constants(cfg.d)?;
    let mut out = String::from("d,xi,c0,sigma_d,c1_bar,xi_tilde,xi_d,nu_s,nu_m,c_s,c_m,gamma0\n");
    let _ = write!(out, "{},{},{},{},{},{},{}", cfg.d, cfg.xi, land.c0, land.sigma_d, land.c1_bar, xi_tilde, xi_d);
    match land.extrema {
        Some(e) => {
            let _ = writeln!(out, ",{},{},{},{},{}", e.nu_s, e.nu_m, e.c_s, e.c_m, e.gamma0);
        }
        None => out.push_str(",,,,,\n"),
    }
    emit(cfg.report.as_deref(), &out)?;
    Ok(Outcome::Done)
}

pub fn minimize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = model(cfg)?;
    let omega = match cfg.omega {
        Some(w) => w,
        None => extrema(&p)?.nu_m,
    };
    let mcfg = minimize_config(cfg)?;
    let init = cold_start(omega, p, cfg.n)?;
    let r = constrained_minimize(omega, &init, &mcfg)?;
    emit(cfg.report.as_deref(), &r.to_csv())?;
    save_field(cfg.out.as_deref(), &r.field)?;
    Ok(outcome(r.converged))
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = model(cfg)?;
    let lo = cfg.omega_min.unwrap_or(0.0);
    let hi = match cfg.omega_max {
        Some(w) => w,
        None => extrema(&p)?.nu_m,
    };
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(CliError::Config(format!("omega-min {lo} exceeds omega-max {hi}")));
    }
    let steps = cfg.steps.unwrap_or(25);
    if steps == 0 {
        return Err(CliError::Config("steps must be positive".into()));
    }
    let mcfg = minimize_config(cfg)?;
    let curve = barrier_sweep(&omega_grid(lo, hi, steps), p, cfg.n, &mcfg, SweepMode::Warm)?;
    emit(cfg.report.as_deref(), &curve.to_csv())?;
    Ok(outcome(curve.samples.iter().all(|s| s.converged)))
}

pub fn path(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = model(cfg)?;
    let e = extrema(&p)?;
    let omega2 = cfg.omega.unwrap_or(e.nu_m);
    let spec = PathSpec::new(0.1 * e.nu_s, omega2);
    let steps = cfg.steps.unwrap_or(50);
    if steps < 2 {
        return Err(CliError::Config("path needs at least 2 steps".into()));
    }
    let mut out = String::from("t,energy,nu\n");
    let mut best = f64::NEG_INFINITY;
    for i in 0..steps {
        let t = if i + 1 == steps { 1.0 } else { i as f64 / (steps - 1) as f64 };
        let f = path_point(t, &spec, p, cfg.n)?;
        let energy = energy_gap(&f);
        best = best.max(energy);
        let _ = writeln!(out, "{t},{energy},{}", nu(&f));
    }
    let _ = writeln!(out, "# max_energy={best}");
    emit(cfg.report.as_deref(), &out)?;
    Ok(Outcome::Done)
}

pub fn diagnose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = match &cfg.input {
        Some(path) => read_field(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let p = model(cfg)?;
            let omega = match cfg.omega {
                Some(w) => w,
                None => extrema(&p)?.nu_m,
            };
            droplet(omega, p, cfg.n, DEFAULT_CUTOFF)?
        }
    };
    let report = shape_report(&f, cfg.levels.unwrap_or(33))?;
    emit(cfg.report.as_deref(), &report.to_csv())?;
    Ok(Outcome::Done)
}

pub fn symmetrize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input.as_ref().ok_or_else(|| CliError::Config("symmetrize needs an input field".into()))?;
    let out = cfg.out.as_ref().ok_or_else(|| CliError::Config("symmetrize needs --out".into()))?;
    let f = read_field(input).map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
    let g = steiner_symmetrize(&f);
    save_field(Some(out), &g)?;
    emit(cfg.report.as_deref(), &energy_decrease_report(&f).to_csv())?;
    Ok(Outcome::Done)
}

pub fn localmin(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = model(cfg)?;
    let mcfg = minimize_config(cfg)?;
    let b = local_minimize_ball(p, cfg.n, &mcfg)?;
    let r = &b.result;
    let text = format!(
        "energy,lambda_phi,el_residual,iterations,converged,nu,distance,radius\n{},{},{},{},{},{},{},{}\n",
        r.energy,
        r.lambda_phi,
        r.el_residual,
        r.iterations,
        r.converged,
        nu(&r.field),
        b.distance,
        b.radius
    );
    emit(cfg.report.as_deref(), &text)?;
    save_field(cfg.out.as_deref(), &r.field)?;
    Ok(outcome(r.converged))
}
