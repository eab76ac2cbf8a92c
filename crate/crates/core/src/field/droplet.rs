//! Sharp droplet profiles, the smooth tanh droplet used as an upper-bound
//! construction, and the mountain-pass path built from it.

use std::f64::consts::SQRT_2;

use super::nu;
use super::{signed_index, uniform_field, Field, ModelParams};
use crate::error::{Error, Result};
use crate::numeric::{bisect, unit_sphere_area};

/// Default cutoff `R` of the droplet profile, in units of `phi`.
pub const DEFAULT_CUTOFF: f64 = 8.0;

/// Sharp profile `Psi(.; omega)`: `+1` on a periodic ball of volume `omega`
/// centred at `center`, `-1` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpProfile {
    pub omega: f64,
    pub center: Vec<f64>,
}

impl SharpProfile {
    /// Profile centred at the origin.
    pub fn centered(omega: f64, d: usize) -> Self {
        Self { omega, center: vec![0.0; d] }
    }
}

/// Radius of a ball of volume `omega` in R^d.
pub(crate) fn ball_radius(omega: f64, d: usize) -> f64 {
    (omega * d as f64 / unit_sphere_area(d)).powf(1.0 / d as f64)
}

/// Periodic Euclidean distance from every cell centre to `center`.
fn distances(p: &ModelParams, n: usize, center: &[f64]) -> Result<Vec<f64>> {
    let d = p.d();
    if center.len() != d {
        return Err(Error::domain(format!("center has {} coordinates, grid has d = {d}", center.len())));
    }
    let ell = p.ell();
    let h = ell / n as f64;
    let len = n.pow(d as u32);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut rest = i;
        let mut r2 = 0.0;
        for &c in center {
            let k = rest % n;
            rest /= n;
            let mut dx = (signed_index(k, n) as f64 * h - c) % ell;
            if dx >= 0.5 * ell {
                dx -= ell;
            } else if dx < -0.5 * ell {
                dx += ell;
            }
            r2 += dx * dx;
        }
        out.push(r2.sqrt());
    }
    Ok(out)
}

/// Rasterises `Psi(.; omega)` by cell centres.
pub fn make_sharp_profile(sp: &SharpProfile, p: ModelParams, n: usize) -> Result<Field> {
    super::validate_cells(n)?;
    if !(sp.omega >= 0.0) {
        return Err(Error::domain(format!("profile volume must be >= 0, got {}", sp.omega)));
    }
    let r = ball_radius(sp.omega, p.d());
    if r > 0.5 * p.ell() {
        return Err(Error::Geometry(format!(
            "ball of volume {} (radius {r}) does not fit in a torus of side {}",
            sp.omega,
            p.ell()
        )));
    }
    let dist = distances(&p, n, &sp.center)?;
    let values = dist.into_iter().map(|rho| if sp.omega > 0.0 && rho <= r { 1.0 } else { -1.0 }).collect();
    Ok(Field::from_parts(p, n, values))
}

/// The odd profile `v_R`: `-tanh(s / sqrt 2)` for `|s| < R`, `-sgn(s)` for
/// `|s| > 2R`, and a monotone cubic Hermite blend in between.
pub fn profile_v(s: f64, cutoff: f64) -> f64 {
    let a = s.abs();
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    let magnitude = if a < cutoff {
        (a / SQRT_2).tanh()
    } else if a > 2.0 * cutoff {
        1.0
    } else {
        // Blend from (R, tanh(R/sqrt2)) with matching slope to (2R, 1) with
        // zero slope; slopes are limited (Fritsch-Carlson) to stay monotone.
        let y0 = (cutoff / SQRT_2).tanh();
        let delta = 1.0 - y0;
        let sech = 1.0 / (cutoff / SQRT_2).cosh();
        let mut m0 = sech * sech / SQRT_2;
        if delta > 0.0 {
            let alpha = m0 * cutoff / delta;
            if alpha > 3.0 {
                m0 = 3.0 * delta / cutoff;
            }
        } else {
            m0 = 0.0;
        }
        let t = (a - cutoff) / cutoff;
        let h00 = 2.0 * t * t * t - 3.0 * t * t + 1.0;
        let h10 = t * t * t - 2.0 * t * t + t;
        let h01 = -2.0 * t * t * t + 3.0 * t * t;
        h00 * y0 + h10 * cutoff * m0 + h01
    };
    -sign * magnitude
}

/// Smooth droplet of nominal volume `omega` centred at the origin.
///
/// `u(x) = v_R((|x| - r) / phi) + alpha` with `r` the radius of a ball of
/// volume `omega` and `alpha` the constant restoring the mean `-1 + phi`.
/// `cutoff` is `R` in units of `phi`.
pub fn droplet(omega: f64, p: ModelParams, n: usize, cutoff: f64) -> Result<Field> {
    droplet_with_center(omega, p, n, cutoff, &vec![0.0; p.d()])
}

pub fn droplet_with_center(omega: f64, p: ModelParams, n: usize, cutoff: f64, center: &[f64]) -> Result<Field> {
    super::validate_cells(n)?;
    let limit = p.limit();
    if !(omega > 0.0 && omega <= limit.max_volume()) {
        return Err(Error::domain(format!("droplet volume must lie in (0, {}], got {omega}", limit.max_volume())));
    }
    if !(cutoff > 0.0) {
        return Err(Error::domain(format!("profile cutoff must be positive, got {cutoff}")));
    }
    let phi = p.phi();
    let r = ball_radius(omega, p.d());
    if r + 2.0 * cutoff * phi > 0.5 * p.ell() {
        return Err(Error::Geometry(format!(
            "droplet of radius {r} plus interface {} exceeds half the torus side {}",
            2.0 * cutoff * phi,
            0.5 * p.ell()
        )));
    }
    let dist = distances(&p, n, center)?;
    let base: Vec<f64> = dist.into_iter().map(|rho| profile_v((rho - r) / phi, cutoff)).collect();
    let base = Field::from_parts(p, n, base);
    let target = p.mean();
    // The mean is affine in the shift, so one correction solves it; a second
    // pass removes the rounding of the first.
    let mut alpha = target - base.mean();
    let mut field = add_constant(&base, alpha);
    for _ in 0..2 {
        let err = field.mean() - target;
        if err.abs() <= 1e-12 {
            break;
        }
        alpha -= err;
        field = add_constant(&base, alpha);
    }
    let err = field.mean() - target;
    if err.abs() > 1e-12 {
        return Err(Error::Bracket(format!("droplet mean correction left error {err:e}")));
    }
    Ok(field)
}

/// Droplet whose volume functional equals `omega`.
///
/// The diffuse interface makes `nu(droplet(w))` fall short of `w` by
/// `O(phi |ln phi|)`. The nominal volume `w` is found by bisection so that
/// `nu` matches `omega` to the resolution of the bisection; a constraint
/// projection removes what is left.
pub fn volume_matched_droplet(omega: f64, p: ModelParams, n: usize, cutoff: f64) -> Result<Field> {
    if omega == 0.0 {
        return uniform_field(p, n);
    }
    let max = p.limit().max_volume();
    if !(omega > 0.0 && omega <= max) {
        return Err(Error::domain(format!("droplet volume must lie in (0, {max}], got {omega}")));
    }
    // Largest nominal volume whose droplet still fits.
    let room = 0.5 * p.ell() - 2.0 * cutoff * p.phi();
    if room <= 0.0 {
        return Err(Error::Geometry("interface wider than the torus".into()));
    }
    let fit = unit_sphere_area(p.d()) / p.d() as f64 * room.powi(p.d() as i32);
    let hi = max.min(fit * (1.0 - 1e-12));
    let residual = |w: f64| match droplet(w, p, n, cutoff) {
        Ok(f) => nu(&f) - omega,
        Err(_) => f64::NAN,
    };
    let lo = 1e-9 * hi;
    let w = bisect(residual, lo, hi, 1e-13 * hi)
        .ok_or_else(|| Error::Bracket(format!("no droplet of nominal volume up to {hi} reaches nu = {omega}")))?;
    droplet(w, p, n, cutoff)
}

fn add_constant(f: &Field, c: f64) -> Field {
    Field::from_parts(*f.params(), f.n(), f.values().iter().map(|v| v + c).collect())
}

/// Parameters of the two-stage path from the uniform state to a droplet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    /// Volume reached at the end of the linear stage.
    pub omega1: f64,
    /// Final volume.
    pub omega2: f64,
    /// Time at which the linear stage ends.
    pub t1: f64,
    /// Droplet profile cutoff (units of `phi`).
    pub cutoff: f64,
}

impl PathSpec {
    /// Path to `omega2` with `t1 = 0.2` and `omega1 = 0.1 nu_s`.
    pub fn new(omega1: f64, omega2: f64) -> Self {
        Self { omega1, omega2, t1: 0.2, cutoff: DEFAULT_CUTOFF }
    }

    /// Droplet volume at time `t > t1`.
    pub fn omega_at(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return self.omega2;
        }
        self.omega1 + (t - self.t1) / (1.0 - self.t1) * (self.omega2 - self.omega1)
    }
}

/// A point on the path: a convex combination of the uniform state and
/// `droplet(omega1)` for `t <= t1`, then droplets with volume growing
/// linearly to `omega2`.
pub fn path_point(t: f64, spec: &PathSpec, p: ModelParams, n: usize) -> Result<Field> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("path time must lie in [0, 1], got {t}")));
    }
    if !(spec.omega1 > 0.0 && spec.omega1 < spec.omega2 && spec.omega2 <= p.limit().max_volume()) {
        return Err(Error::domain(format!(
            "path volumes must satisfy 0 < omega1 < omega2 <= xi^(d+1)/2, got {} and {}",
            spec.omega1, spec.omega2
        )));
    }
    if !(spec.t1 > 0.0 && spec.t1 < 1.0) {
        return Err(Error::domain(format!("t1 must lie in (0, 1), got {}", spec.t1)));
    }
    if t <= spec.t1 {
        let s = t / spec.t1;
        let bar = uniform_field(p, n)?;
        if s == 0.0 {
            return Ok(bar);
        }
        let drop = droplet(spec.omega1, p, n, spec.cutoff)?;
        let values = bar.values().iter().zip(drop.values()).map(|(a, b)| (1.0 - s) * a + s * b).collect();
        Ok(Field::from_parts(p, n, values))
    } else {
        droplet(spec.omega_at(t), p, n, spec.cutoff)
    }
}
