//! The sharp-interface limit of the rescaled energy gap.
//!
//! For a set of volume `nu` the limit energy is minimised by a ball, which
//! reduces the landscape to the scalar function
//! `f_xi(nu) = C1 nu^{(d-1)/d} - 4 nu + 4 xi^{-(d+1)} nu^2`.
//! Its positive critical points `nu_s < nu_m` are the volumes of the limit
//! saddle (critical nucleus) and of the limit droplet.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::numeric::{bisect, unit_sphere_area};

/// Absolute tolerance on `nu` for all root searches in this module.
pub const ROOT_TOL: f64 = 1e-12;

/// Surface tension of the quartic double well, `int_{-1}^{1} sqrt(2 G)`.
pub const C0: f64 = 2.0 * SQRT_2 / 3.0;

/// Dimension and reduced system size of the limit problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParams {
    d: usize,
    xi: f64,
}

impl LimitParams {
    pub fn new(d: usize, xi: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::domain(format!("xi must be positive and finite, got {xi}")));
        }
        Ok(Self { d, xi })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `xi^{d+1}`, the total limit "mass" available to a droplet.
    pub fn xi_pow(&self) -> f64 {
        self.xi.powi(self.d as i32 + 1)
    }

    /// Upper end `xi^{d+1}/2` of the admissible droplet volumes.
    pub fn max_volume(&self) -> f64 {
        0.5 * self.xi_pow()
    }
}

/// Positive local extrema of `f_xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    /// Volume of the local maximum (limit saddle).
    pub nu_s: f64,
    /// Volume of the positive local minimum (limit droplet).
    pub nu_m: f64,
    pub c_s: f64,
    pub c_m: f64,
    /// `2 sqrt(nu_m - nu_s)`, the radius of the basin around the droplet.
    pub gamma0: f64,
}

/// Closed-form constants of the limit model together with the extrema of
/// `f_xi` when they exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitLandscape {
    pub params: LimitParams,
    pub c0: f64,
    pub sigma_d: f64,
    pub c1_bar: f64,
    pub xi_tilde: f64,
    pub xi_d: f64,
    /// The unique minimiser of `f'_xi` on `(0, inf)`; the extrema merge here
    /// at `xi = xi_tilde`.
    pub inflection: f64,
    pub extrema: Option<Extrema>,
}

/// `C1 = c0 sigma_d^{1/d} d^{(d-1)/d}`.
pub fn c1_bar(d: usize) -> f64 {
    let df = d as f64;
    C0 * unit_sphere_area(d).powf(1.0 / df) * df.powf((df - 1.0) / df)
}

/// `f_xi(nu)`.
pub fn f_xi(nu: f64, p: &LimitParams) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!("f_xi needs nu >= 0, got {nu}")));
    }
    Ok(f_unchecked(nu, p, c1_bar(p.d)))
}

fn f_unchecked(nu: f64, p: &LimitParams, c1: f64) -> f64 {
    let df = p.d as f64;
    c1 * nu.powf((df - 1.0) / df) - 4.0 * nu + 4.0 * nu * nu / p.xi_pow()
}

/// `f'_xi(nu)`, singular at zero.
pub fn f_xi_prime(nu: f64, p: &LimitParams) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!("f'_xi needs nu > 0, got {nu}")));
    }
    Ok(fp_unchecked(nu, p, c1_bar(p.d)))
}

fn fp_unchecked(nu: f64, p: &LimitParams, c1: f64) -> f64 {
    let df = p.d as f64;
    (df - 1.0) / df * c1 * nu.powf(-1.0 / df) - 4.0 + 8.0 * nu / p.xi_pow()
}

/// `f''_xi(nu)`.
pub fn f_xi_second(nu: f64, p: &LimitParams) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!("f''_xi needs nu > 0, got {nu}")));
    }
    Ok(fpp_unchecked(nu, p, c1_bar(p.d)))
}

fn fpp_unchecked(nu: f64, p: &LimitParams, c1: f64) -> f64 {
    let df = p.d as f64;
    -(df - 1.0) / (df * df) * c1 * nu.powf(-1.0 / df - 1.0) + 8.0 / p.xi_pow()
}

/// The bifurcation point `xi_tilde` (extrema appear) and the crossover point
/// `xi_d` (the droplet becomes the global minimiser).
pub fn critical_constants(d: usize) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
    }
    let df = d as f64;
    let sigma = unit_sphere_area(d);
    let common = C0.powf(df / (df + 1.0)) * sigma.powf(1.0 / (df + 1.0)) * (df + 1.0)
        / (4f64.powf(df / (df + 1.0)) * df.powf(1.0 / (df + 1.0)));
    let xi_d = common;
    let xi_tilde = common * (1.0 - 1.0 / df).powf(df / (df + 1.0)) * 2f64.powf(1.0 / (df + 1.0));
    Ok((xi_tilde, xi_d))
}

/// Evaluates the constants and brackets the two positive roots of `f'_xi`.
///
/// `f'` decreases up to the inflection volume and increases after it, so
/// `(0, inflection)` and `(inflection, xi^{d+1}/2)` each hold at most one
/// root. Extrema are reported only for `xi > xi_tilde`.
pub fn solve_extrema(p: &LimitParams) -> LimitLandscape {
    let d = p.d;
    let c1 = c1_bar(d);
    let (xi_tilde, xi_d) = critical_constants(d).expect("LimitParams guarantees d >= 2");
    let hi = p.max_volume();

    // f'' is increasing in nu; push the upper end out until it brackets.
    let mut upper = hi.max(1.0);
    while fpp_unchecked(upper, p, c1) <= 0.0 {
        upper *= 2.0;
    }
    let mut lower = upper;
    while fpp_unchecked(lower, p, c1) >= 0.0 {
        lower *= 0.5;
    }
    let inflection =
        bisect(|nu| fpp_unchecked(nu, p, c1), lower, upper, ROOT_TOL).expect("f'' changes sign on [lower, upper]");

    let extrema = if p.xi > xi_tilde && fp_unchecked(inflection, p, c1) < 0.0 {
        let fp = |nu: f64| fp_unchecked(nu, p, c1);
        let nu_s = bisect(fp, 1e-9_f64.min(0.5 * inflection), inflection, ROOT_TOL);
        let nu_m = bisect(fp, inflection, hi, ROOT_TOL);
        match (nu_s, nu_m) {
            (Some(nu_s), Some(nu_m)) if nu_s < nu_m => Some(Extrema {
                nu_s,
                nu_m,
                c_s: f_unchecked(nu_s, p, c1),
                c_m: f_unchecked(nu_m, p, c1),
                gamma0: 2.0 * (nu_m - nu_s).sqrt(),
            }),
            _ => None,
        }
    } else {
        None
    };

    LimitLandscape { params: *p, c0: C0, sigma_d: unit_sphere_area(d), c1_bar: c1, xi_tilde, xi_d, inflection, extrema }
}

/// Limit energy `c0 Per - 4 |A| + 4 |A|^2 / xi^{d+1}` of a set with the given
/// perimeter and volume.
pub fn limit_energy_set(perimeter: f64, volume: f64, p: &LimitParams) -> f64 {
    C0 * perimeter - 4.0 * volume + 4.0 * volume * volume / p.xi_pow()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: usize, xi: f64) -> LimitParams {
        LimitParams::new(d, xi).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LimitParams::new(1, 1.0).is_err());
        assert!(LimitParams::new(2, 0.0).is_err());
        assert!(LimitParams::new(2, f64::NAN).is_err());
        assert!(critical_constants(1).is_err());
    }

    #[test]
    fn f_at_zero_vanishes() {
        for d in 2..6 {
            for xi in [0.5, 1.0, 1.5, 3.0] {
                assert_eq!(f_xi(0.0, &p(d, xi)).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn negative_volume_is_a_domain_error() {
        assert!(matches!(f_xi(-1e-3, &p(2, 1.5)), Err(Error::Domain(_))));
        assert!(matches!(f_xi_prime(0.0, &p(2, 1.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn below_bifurcation_has_no_extrema() {
        assert!(solve_extrema(&p(2, 1.0)).extrema.is_none());
        let (xt, _) = critical_constants(3).unwrap();
        assert!(solve_extrema(&p(3, 0.99 * xt)).extrema.is_none());
    }

    #[test]
    fn extrema_are_ordered() {
        for d in 2..6 {
            let (xt, xd) = critical_constants(d).unwrap();
            for xi in [1.01 * xt, 0.5 * (xt + xd), xd, 1.3 * xd] {
                let prm = p(d, xi);
                let e = solve_extrema(&prm).extrema.unwrap();
                assert!(0.0 < e.nu_s && e.nu_s < e.nu_m && e.nu_m < prm.max_volume());
                assert!(e.c_m < e.c_s);
                assert!((e.gamma0 * e.gamma0 - 4.0 * (e.nu_m - e.nu_s)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = solve_extrema(&p(2, 1.5));
        let b = solve_extrema(&p(2, 1.5));
        let (ea, eb) = (a.extrema.unwrap(), b.extrema.unwrap());
        assert_eq!(ea.nu_s.to_bits(), eb.nu_s.to_bits());
        assert_eq!(ea.c_m.to_bits(), eb.c_m.to_bits());
    }

    #[test]
    fn unit_square_limit_energy() {
        let prm = p(2, 1.5);
        let e = limit_energy_set(4.0, 1.0, &prm);
        assert!((e - (C0 * 4.0 - 4.0 + 4.0 / 3.375)).abs() < 1e-15);
        assert_eq!(limit_energy_set(0.0, 0.0, &prm), 0.0);
    }
}
