//! `L^2` distance on the torus, optionally minimised over lattice shifts.

use std::cmp::Ordering;

use super::Field;
use crate::error::Result;
use crate::numeric::sum_by;
use crate::spectral::cyclic_cross_correlation;

/// Plain `L^2` distance `||f - g||`.
pub fn l2_dist(f: &Field, g: &Field) -> Result<f64> {
    f.same_grid(g)?;
    let (a, b) = (f.values(), g.values());
    Ok((sum_by(a.len(), |i| (a[i] - b[i]).powi(2)) * f.cell_volume()).sqrt())
}

/// `min_s ||f - g(. - s)||` over all `n^d` lattice shifts.
///
/// The overlap `<f, g(. - s)>` for every shift comes from one cyclic
/// cross-correlation. Among the shifts within round-off of the minimum the
/// lexicographically smallest (axis 0 compared first) is returned, and the
/// distance is recomputed directly at that shift.
pub fn l2_dist_mod_translation(f: &Field, g: &Field) -> Result<(f64, Vec<usize>)> {
    f.same_grid(g)?;
    let n = f.n();
    let d = f.d();
    let (a, b) = (f.values(), g.values());
    let na: f64 = sum_by(a.len(), |i| a[i] * a[i]);
    let nb: f64 = sum_by(b.len(), |i| b[i] * b[i]);
    let corr = cyclic_cross_correlation(a, b, n, d);
    let sq: Vec<f64> = corr.iter().map(|c| na + nb - 2.0 * c).collect();
    let best = sq.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (na + nb) + 1e-300;
    let mut chosen: Option<Vec<usize>> = None;
    for (i, &v) in sq.iter().enumerate() {
        if v <= best + tol {
            let s = f.coords(i);
            let smaller = match &chosen {
                None => true,
                Some(c) => s.cmp(c) == Ordering::Less,
            };
            if smaller {
                chosen = Some(s);
            }
        }
    }
    let shift = chosen.expect("at least one shift attains the minimum");
    let moved = g.shifted(&shift);
    Ok((l2_dist(f, &moved)?, shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{droplet, make_sharp_profile, ModelParams, SharpProfile, DEFAULT_CUTOFF};

    fn params() -> ModelParams {
        ModelParams::new(2, 1.5, 0.04).unwrap()
    }

    fn bumpy(p: ModelParams, n: usize) -> Field {
        Field::from_fn(p, n, |x| (0.9 * x[0]).sin() * (0.4 * x[1] + 0.3).cos() + 0.2 * (1.7 * x[1]).sin()).unwrap()
    }

    #[test]
    fn identical_fields() {
        let f = bumpy(params(), 32);
        let (dist, shift) = l2_dist_mod_translation(&f, &f).unwrap();
        assert_eq!(dist, 0.0);
        assert_eq!(shift, vec![0, 0]);
    }

    #[test]
    fn recovers_known_shift() {
        let f = bumpy(params(), 64);
        let g = f.shifted(&[5, 61]);
        let (dist, shift) = l2_dist_mod_translation(&f, &g).unwrap();
        assert_eq!(dist, 0.0);
        assert_eq!(shift, vec![59, 3]);
    }

    #[test]
    fn uniform_ties_resolve_to_zero_shift() {
        let p = params();
        let f = Field::constant(p, 32, 0.3).unwrap();
        let g = Field::constant(p, 32, -0.2).unwrap();
        let (dist, shift) = l2_dist_mod_translation(&f, &g).unwrap();
        assert_eq!(shift, vec![0, 0]);
        assert!((dist - 0.5 * p.torus_volume().sqrt()).abs() < 1e-10);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let p = params();
        let f = Field::constant(p, 32, 0.0).unwrap();
        let g = Field::constant(p, 64, 0.0).unwrap();
        assert!(l2_dist_mod_translation(&f, &g).is_err());
    }

    #[test]
    fn sharp_profiles_differ_by_volume() {
        let p = params();
        let n = 256;
        let a = make_sharp_profile(&SharpProfile::centered(0.4, 2), p, n).unwrap();
        let b = make_sharp_profile(&SharpProfile::centered(0.9, 2), p, n).unwrap();
        let dist = l2_dist(&a, &b).unwrap();
        let h = a.h();
        let perimeter = 2.0 * (std::f64::consts::PI * 0.9).sqrt();
        assert!((dist * dist - 4.0 * 0.5).abs() <= 4.0 * h * perimeter, "{}", dist * dist);
    }

    #[test]
    fn droplet_is_close_to_its_sharp_profile() {
        let p = params();
        let f = droplet(0.8, p, 128, DEFAULT_CUTOFF).unwrap();
        let g = make_sharp_profile(&SharpProfile { omega: 0.8, center: vec![1.0, -2.0] }, p, 128).unwrap();
        let (dist, _) = l2_dist_mod_translation(&f, &g).unwrap();
        assert!(dist * dist < 0.5, "{}", dist * dist);
    }
}
