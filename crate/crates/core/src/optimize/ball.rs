use super::{descend, ConstrainedResult, Constraint, MinimizeConfig};
use crate::error::{Error, Result};
use crate::field::DEFAULT_CUTOFF;
use crate::field::{droplet, l2_dist, l2_dist_mod_translation, make_sharp_profile, Field, ModelParams, SharpProfile};
use crate::limit_model::solve_extrema;

/// Local minimiser inside the ball around the limit droplet.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMinimum {
    pub result: ConstrainedResult,
    /// `L^2` distance modulo translations to the sharp droplet of volume `nu_m`.
    pub distance: f64,
    /// Ball radius `gamma0`.
    pub radius: f64,
}

/// Minimises the energy gap under the mean constraint alone, starting from
/// the droplet of volume `nu_m` and rejecting every step that leaves the
/// ball of radius `gamma0` (modulo translations) around the sharp droplet.
///
/// Requires `xi_tilde < xi <= xi_d`.
pub fn local_minimize_ball(p: ModelParams, n: usize, cfg: &MinimizeConfig) -> Result<BallMinimum> {
    let land = solve_extrema(&p.limit());
    let ext = match land.extrema {
        Some(e) if p.xi() <= land.xi_d => e,
        _ => return Err(Error::Config(format!("xi = {} lies outside ({}, {}]", p.xi(), land.xi_tilde, land.xi_d))),
    };
    let psi = make_sharp_profile(&SharpProfile::centered(ext.nu_m, p.d()), p, n)?;
    let start = droplet(ext.nu_m, p, n, DEFAULT_CUTOFF)?;
    let radius = ext.gamma0;
    let (d0, shift0) = l2_dist_mod_translation(&start, &psi)?;
    if d0 > radius {
        return Err(Error::Config(format!(
            "initial droplet lies at distance {d0} outside the ball of radius {radius}"
        )));
    }

    // Most trial points stay close to the last accepted alignment, so test
    // that shift before scanning all of them.
    let mut shift = shift0;
    let mut inside = |f: &Field| -> bool {
        if let Ok(d) = l2_dist(f, &psi.shifted(&shift)) {
            if d <= radius {
                return true;
            }
        }
        match l2_dist_mod_translation(f, &psi) {
            Ok((d, s)) if d <= radius => {
                shift = s;
                true
            }
            _ => false,
        }
    };
    let result = descend(&start, Constraint::MeanOnly, cfg, &mut inside)?;
    let (distance, _) = l2_dist_mod_translation(&result.field, &psi)?;
    Ok(BallMinimum { result, distance, radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outside_window_is_rejected() {
        let p = ModelParams::new(2, 1.0, 0.04).unwrap();
        assert!(matches!(local_minimize_ball(p, 64, &MinimizeConfig::default()), Err(Error::Config(_))));
        let p = ModelParams::new(2, 2.0, 0.04).unwrap();
        assert!(matches!(local_minimize_ball(p, 64, &MinimizeConfig::default()), Err(Error::Config(_))));
    }

    #[test]
    fn short_run_stays_in_ball() {
        let p = ModelParams::new(2, 1.5, 0.08).unwrap();
        let cfg = MinimizeConfig { max_iter: 200, ..Default::default() };
        let b = local_minimize_ball(p, 64, &cfg).unwrap();
        assert!(b.distance <= b.radius);
        assert_eq!(b.result.lambda_omega, 0.0);
        assert!((b.result.field.mean() - p.mean()).abs() <= 1e-10);
    }
}
