//! Constrained minimisation of the energy gap: projection onto the
//! constraint set, projected gradient descent with Armijo backtracking,
//! Lagrange multipliers, the barrier sweep and the local minimiser near the
//! limit droplet.

mod ball;
mod sweep;

pub use ball::{local_minimize_ball, BallMinimum};
pub use sweep::{barrier_sweep, cold_start, omega_grid, BarrierCurve, BarrierSample, SweepMode};

use crate::error::{Error, Result};
use crate::field::{
    chi3_prime, double_well_prime, energy_gap, energy_gap_difference, energy_gradient, laplacian, nu, nu_of_values,
    Field,
};
use crate::numeric::sum_by;

/// Newton iteration cap of [`project_constraints`].
pub const PROJECTION_MAX_ITER: usize = 50;

/// Settings of the descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeConfig {
    pub max_iter: usize,
    /// Sup-norm of the projected gradient at which the descent stops.
    pub grad_tol: f64,
    /// Allowed violation of the mean and volume constraints.
    pub constraint_tol: f64,
    /// Backtracking factor.
    pub shrink: f64,
    /// Armijo sufficient-decrease constant.
    pub slope: f64,
    /// First trial step; later iterations start from twice the last
    /// accepted step, capped here.
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            grad_tol: 1e-5,
            constraint_tol: 1e-10,
            shrink: 0.5,
            slope: 1e-4,
            initial_step: 1.0,
            seed: 0,
        }
    }
}

impl MinimizeConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.grad_tol, self.constraint_tol, self.slope, self.initial_step];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Config("tolerances and steps must be positive and finite".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) || self.slope >= 1.0 {
            return Err(Error::Config("shrink must lie in (0, 1) and slope below 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedResult {
    pub field: Field,
    pub energy: f64,
    /// Multiplier of the mean constraint.
    pub lambda_phi: f64,
    /// Multiplier of the volume constraint (zero when it is absent).
    pub lambda_omega: f64,
    /// Sup-norm of the Euler-Lagrange left-hand side.
    pub el_residual: f64,
    /// Accepted descent steps.
    pub iterations: usize,
    pub converged: bool,
    /// Initial energy followed by the running total of the accepted
    /// decreases, one entry per step.
    pub energy_log: Vec<f64>,
}

impl ConstrainedResult {
    /// One-row CSV with a header.
    pub fn to_csv(&self) -> String {
        format!(
            "energy,lambda_phi,lambda_omega,el_residual,iterations,converged\n{},{},{},{},{},{}\n",
            self.energy, self.lambda_phi, self.lambda_omega, self.el_residual, self.iterations, self.converged
        )
    }
}

/// Constraints enforced during a descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Constraint {
    MeanOnly,
    MeanAndVolume(f64),
}

/// Sup-norm of `-phi Lap u + G'(u)/phi + lambda_phi + lambda_omega chi3'(u)`.
pub fn el_residual(f: &Field, lambda_phi: f64, lambda_omega: f64) -> f64 {
    let p = f.params();
    let (phi, kappa) = (p.phi(), p.kappa());
    let lap = laplacian(f);
    f.values()
        .iter()
        .zip(&lap)
        .map(|(&u, &l)| {
            (-phi * l + double_well_prime(u) / phi + lambda_phi + lambda_omega * chi3_prime(u, kappa)).abs()
        })
        .fold(0.0, f64::max)
}

fn check_omega(f: &Field, omega: f64) -> Result<()> {
    let max = f.params().limit().max_volume();
    if !(0.0..=max).contains(&omega) {
        return Err(Error::domain(format!("volume constraint must lie in [0, {max}], got {omega}")));
    }
    Ok(())
}

/// Moves `f` onto `{mean = -1 + phi, nu = omega}` along `1` and
/// `chi3'(f)`, with the default tolerance `1e-10`.
pub fn project_constraints(f: &Field, omega: f64) -> Result<Field> {
    project_constraints_with(f, omega, MinimizeConfig::default().constraint_tol)
}

/// Returns `f + a + b chi3'(f)` with `(a, b)` chosen so the mean is
/// `-1 + phi` and `nu = omega`, each to `tol`. A field that already meets
/// both constraints is returned unchanged.
///
/// The mean is affine in `(a, b)`, so `a` is eliminated and the remaining
/// scalar equation in `b` is solved by Newton's method. Steps that do not
/// reduce the residual are halved; a vanishing derivative with a nonzero
/// residual is a failure.
pub fn project_constraints_with(f: &Field, omega: f64, tol: f64) -> Result<Field> {
    check_omega(f, omega)?;
    if (f.mean() - f.params().mean()).abs() <= tol && (nu(f) - omega).abs() <= tol {
        return Ok(f.clone());
    }
    newton_project(f, omega, tol)
}

/// Newton solve of the projection. Iterates past `tol` down to the rounding
/// floor, so consecutive descent iterates do not drift inside the tolerance.
fn newton_project(f: &Field, omega: f64, tol: f64) -> Result<Field> {
    let p = *f.params();
    let kappa = p.kappa();
    let vol = f.cell_volume();
    let aim = (1e-4 * tol).max(1e-15);
    let mean_err = f.mean() - p.mean();
    let u0 = f.values();
    let len = u0.len();
    let c: Vec<f64> = u0.iter().map(|&u| chi3_prime(u, kappa)).collect();
    let cbar = sum_by(len, |i| c[i]) / len as f64;
    let dir: Vec<f64> = c.iter().map(|&ci| ci - cbar).collect();
    let at = |b: f64| -> Vec<f64> { (0..len).map(|i| u0[i] - mean_err + b * dir[i]).collect() };

    let mut b = 0.0;
    let mut values = at(b);
    let mut residual = nu_of_values(&values, kappa) * vol - omega;
    let mut iter = 0;
    while residual.abs() > aim && iter < PROJECTION_MAX_ITER {
        iter += 1;
        let slope = sum_by(len, |i| chi3_prime(values[i], kappa) * dir[i]) * vol;
        if !(slope.abs() > 0.0) || !slope.is_finite() {
            break;
        }
        let mut step = -residual / slope;
        let mut improved = false;
        // Near the rounding floor only a few halvings are worth trying.
        let tries = if residual.abs() <= tol { 4 } else { 40 };
        for _ in 0..tries {
            let trial = at(b + step);
            let r = nu_of_values(&trial, kappa) * vol - omega;
            if r.abs() < residual.abs() {
                b += step;
                values = trial;
                residual = r;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if residual.abs() <= tol {
        return Field::new(p, f.n(), values);
    }
    Err(Error::ProjectionFailed { iterations: iter, residual })
}

fn project(f: &Field, c: Constraint, tol: f64) -> Result<Field> {
    match c {
        Constraint::MeanAndVolume(omega) => newton_project(f, omega, tol),
        Constraint::MeanOnly => {
            let shift = f.params().mean() - f.mean();
            if shift.abs() <= tol {
                return Ok(f.clone());
            }
            f.with_values(f.values().iter().map(|v| v + shift).collect())
        }
    }
}

/// Least-squares fit `g ~ alpha + beta chi3'(u)` and the residual
/// `g - alpha - beta chi3'(u)`.
struct Stationarity {
    alpha: f64,
    beta: f64,
    projected: Vec<f64>,
    sup: f64,
}

fn stationarity(f: &Field, g: &[f64], c: Constraint) -> Stationarity {
    let len = g.len();
    let nf = len as f64;
    let (alpha, beta) = match c {
        Constraint::MeanOnly => (sum_by(len, |i| g[i]) / nf, 0.0),
        Constraint::MeanAndVolume(_) => {
            let kappa = f.params().kappa();
            let u = f.values();
            let ch: Vec<f64> = u.iter().map(|&v| chi3_prime(v, kappa)).collect();
            let sc = sum_by(len, |i| ch[i]);
            let scc = sum_by(len, |i| ch[i] * ch[i]);
            let sg = sum_by(len, |i| g[i]);
            let sgc = sum_by(len, |i| g[i] * ch[i]);
            let det = nf * scc - sc * sc;
            if det > 1e-12 * nf * scc.max(f64::MIN_POSITIVE) {
                ((sg * scc - sc * sgc) / det, (nf * sgc - sc * sg) / det)
            } else {
                (sg / nf, 0.0)
            }
        }
    };
    let kappa = f.params().kappa();
    let u = f.values();
    let projected: Vec<f64> = (0..len)
        .map(|i| {
            let cv = if beta != 0.0 { chi3_prime(u[i], kappa) } else { 0.0 };
            g[i] - alpha - beta * cv
        })
        .collect();
    let sup = projected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Stationarity { alpha, beta, projected, sup }
}

/// Projected gradient descent shared by the constrained and ball-limited
/// minimisers. `admissible` may veto a trial point, which is then treated
/// like a failed Armijo test.
pub(crate) fn descend(
    init: &Field,
    c: Constraint,
    cfg: &MinimizeConfig,
    admissible: &mut dyn FnMut(&Field) -> bool,
) -> Result<ConstrainedResult> {
    cfg.validate()?;
    let mut u = match c {
        Constraint::MeanAndVolume(omega) => project_constraints_with(init, omega, cfg.constraint_tol)?,
        Constraint::MeanOnly => project(init, c, cfg.constraint_tol)?,
    };
    let mut energy = energy_gap(&u);
    let mut log = vec![energy];
    let vol = u.cell_volume();
    let mut last_step: Option<f64> = None;
    let mut iterations = 0;
    let mut converged = false;
    let min_step = cfg.initial_step * 1e-20;
    let st = loop {
        let g = energy_gradient(&u);
        let st = stationarity(&u, g.values(), c);
        if st.sup <= cfg.grad_tol {
            converged = true;
            break st;
        }
        if iterations >= cfg.max_iter {
            break st;
        }
        let pg = &st.projected;
        let gg = sum_by(pg.len(), |i| pg[i] * pg[i]) * vol;
        let mut t = match last_step {
            None => cfg.initial_step,
            Some(s) => (2.0 * s).min(cfg.initial_step),
        };
        let mut next = None;
        while t >= min_step {
            let uv = u.values();
            let trial = Field::new(*u.params(), u.n(), (0..uv.len()).map(|i| uv[i] - t * pg[i]).collect());
            if let Ok(trial) = trial {
                let pr = project(&trial, c, cfg.constraint_tol);
                if let Ok(v) = pr {
                    let de = energy_gap_difference(&u, &v)?;
                    if de <= -cfg.slope * t * gg && admissible(&v) {
                        next = Some((v, de));
                        break;
                    }
                }
            }
            t *= cfg.shrink;
        }
        match next {
            Some((v, de)) => {
                u = v;
                let last = *log.last().expect("log starts with the initial energy");
                log.push(last + de);
                last_step = Some(t);
                iterations += 1;
            }
            // No admissible decrease is left at machine precision.
            None => break st,
        }
    };
    if iterations > 0 {
        energy = energy_gap(&u);
    }
    let gm = double_well_prime(u.params().mean());
    let lambda_phi = -st.alpha - gm / u.params().phi();
    let lambda_omega = -st.beta;
    let el = el_residual(&u, lambda_phi, lambda_omega);
    Ok(ConstrainedResult {
        field: u,
        energy,
        lambda_phi,
        lambda_omega,
        el_residual: el,
        iterations,
        converged,
        energy_log: log,
    })
}

/// Minimises the energy gap over `{mean = -1 + phi, nu = omega}` from `init`.
///
/// Non-convergence within `max_iter` is reported through
/// [`ConstrainedResult::converged`]; a failed initial projection is an
/// error.
pub fn constrained_minimize(omega: f64, init: &Field, cfg: &MinimizeConfig) -> Result<ConstrainedResult> {
    check_omega(init, omega)?;
    descend(init, Constraint::MeanAndVolume(omega), cfg, &mut |_| true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{droplet, uniform_field, volume_matched_droplet, ModelParams, DEFAULT_CUTOFF};

    fn params() -> ModelParams {
        ModelParams::new(2, 1.5, 0.04).unwrap()
    }

    #[test]
    fn feasible_fields_are_untouched() {
        let p = params();
        let u = uniform_field(p, 64).unwrap();
        assert_eq!(project_constraints(&u, 0.0).unwrap(), u);
        let f = volume_matched_droplet(0.5, p, 128, DEFAULT_CUTOFF).unwrap();
        let g = project_constraints(&f, 0.5).unwrap();
        assert!((nu(&g) - 0.5).abs() <= 1e-10);
        assert_eq!(project_constraints(&g, 0.5).unwrap(), g);
    }

    #[test]
    fn perturbed_droplet_is_projected_back() {
        let p = params();
        let f = volume_matched_droplet(0.5, p, 256, DEFAULT_CUTOFF).unwrap();
        let bumped = f.with_values(f.values().iter().map(|v| v + 0.01).collect()).unwrap();
        let g = project_constraints(&bumped, 0.5).unwrap();
        assert!((g.mean() - p.mean()).abs() <= 1e-10);
        assert!((nu(&g) - 0.5).abs() <= 1e-10);
        let change = g.values().iter().zip(bumped.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(change <= 0.05, "{change}");
    }

    #[test]
    fn literal_droplet_is_out_of_reach() {
        // nu(droplet(0.5)) is about 0.435 here and moving only the band
        // cells along chi3' cannot add the missing volume.
        let f = droplet(0.5, params(), 256, DEFAULT_CUTOFF).unwrap();
        assert!(matches!(project_constraints(&f, 0.5), Err(Error::ProjectionFailed { .. })));
    }

    #[test]
    fn projection_needs_a_band() {
        let u = uniform_field(params(), 32).unwrap();
        assert!(matches!(project_constraints(&u, 0.3), Err(Error::ProjectionFailed { .. })));
        assert!(project_constraints(&u, -0.1).is_err());
    }

    #[test]
    fn uniform_is_stationary() {
        let p = params();
        let u = uniform_field(p, 32).unwrap();
        let r = constrained_minimize(0.0, &u, &MinimizeConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.field, u);
        let lp = -double_well_prime(p.mean()) / p.phi();
        assert!((r.lambda_phi - lp).abs() <= 1e-12);
        assert!(el_residual(&u, lp, 0.0) <= 1e-12);
    }

    #[test]
    fn short_runs_report_non_convergence() {
        let p = params();
        let f = volume_matched_droplet(0.9, p, 64, DEFAULT_CUTOFF).unwrap();
        let cfg = MinimizeConfig { max_iter: 1, ..Default::default() };
        let r = constrained_minimize(0.9, &f, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.energy_log.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn descent_is_deterministic_and_monotone() {
        let p = ModelParams::new(2, 1.5, 0.08).unwrap();
        let f = volume_matched_droplet(0.9, p, 64, DEFAULT_CUTOFF).unwrap();
        let cfg = MinimizeConfig { max_iter: 300, ..Default::default() };
        let a = constrained_minimize(0.9, &f, &cfg).unwrap();
        let b = constrained_minimize(0.9, &f, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.energy_log.windows(2).all(|w| w[1] <= w[0]));
        assert!(a.energy <= energy_gap(&f));
        assert!((nu(&a.field) - 0.9).abs() <= 1e-10);
        assert!((a.field.mean() - p.mean()).abs() <= 1e-10);
    }

    #[test]
    fn bad_config() {
        let cfg = MinimizeConfig { shrink: 1.5, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
