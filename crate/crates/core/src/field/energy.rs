//! Rescaled energy gap, its gradient, and the volume functional.

use rayon::prelude::*;

use super::{neighbours, Field};
use crate::numeric::{pairwise_sum, smoothstep, smoothstep_prime, sum_by};

/// Quartic double well `G(u) = (1 - u^2)^2 / 4`.
#[inline]
pub fn double_well(u: f64) -> f64 {
    let a = 1.0 - u * u;
    0.25 * a * a
}

/// `G'(u) = u^3 - u`.
#[inline]
pub fn double_well_prime(u: f64) -> f64 {
    u * (u * u - 1.0)
}

/// `G(u) - G(m) - G'(m)(u - m)`, written as its exact Taylor polynomial about
/// `m` so it does not cancel near the uniform state.
#[inline]
pub(crate) fn well_excess(u: f64, m: f64) -> f64 {
    let w = u - m;
    w * w * (0.5 * (3.0 * m * m - 1.0) + m * w + 0.25 * w * w)
}

/// Partition of unity `(chi1, chi2, chi3)` with bands of width `kappa`.
///
/// `chi1` drops from 1 to 0 on `[-1 + kappa, -1 + 2 kappa]`, `chi3` rises
/// from 0 to 1 on `[1 - 2 kappa, 1 - kappa]`, both along a cubic
/// smoothstep, and `chi2` takes the remainder. The three values are in
/// `[0, 1]` whenever `kappa <= 1/2`.
pub fn chi_partition(t: f64, kappa: f64) -> (f64, f64, f64) {
    let c1 = 1.0 - smoothstep((t - (-1.0 + kappa)) / kappa);
    let c3 = chi3(t, kappa);
    (c1, 1.0 - c1 - c3, c3)
}

#[inline]
pub fn chi3(t: f64, kappa: f64) -> f64 {
    smoothstep((t - (1.0 - 2.0 * kappa)) / kappa)
}

#[inline]
pub fn chi3_prime(t: f64, kappa: f64) -> f64 {
    smoothstep_prime((t - (1.0 - 2.0 * kappa)) / kappa) / kappa
}

/// Volume functional `nu(u) = int chi3(u)`.
///
/// Cells on the upper plateau are counted exactly and the fractional band
/// values are summed in sorted order, so the result depends only on the
/// multiset of values: it is bitwise invariant under any permutation of the
/// cells, lattice shifts and rearrangements included.
pub fn nu(f: &Field) -> f64 {
    let kappa = f.params().kappa();
    nu_of_values(f.values(), kappa) * f.cell_volume()
}

pub(crate) fn nu_of_values(values: &[f64], kappa: f64) -> f64 {
    let mut full = 0usize;
    let mut partial = Vec::new();
    for &u in values {
        let c = chi3(u, kappa);
        if c == 1.0 {
            full += 1;
        } else if c > 0.0 {
            partial.push(c);
        }
    }
    partial.sort_by(|a, b| a.total_cmp(b));
    full as f64 + pairwise_sum(&partial)
}

/// Rescaled energy gap
/// `h^d sum (phi/2) |grad u|^2 + (G(u) - G(m) - G'(m)(u - m)) / phi`.
///
/// Gradients are face differences `(u_{i+e} - u_i) / h`, i.e. central
/// differences at the cell faces; [`energy_gradient`] is the exact
/// derivative of this sum.
pub fn energy_gap(f: &Field) -> f64 {
    let p = f.params();
    let (phi, m) = (p.phi(), p.mean());
    let h = f.h();
    let grad_weight = 0.5 * phi / (h * h);
    let inv_phi = 1.0 / phi;
    let n = f.n();
    let shift = n.trailing_zeros();
    let d = f.d();
    let u = f.values();
    let total = sum_by(u.len(), |i| {
        let ui = u[i];
        let mut g2 = 0.0;
        for axis in 0..d {
            let (plus, _) = neighbours(i, axis, n, shift);
            let du = u[plus] - ui;
            g2 += du * du;
        }
        grad_weight * g2 + inv_phi * well_excess(ui, m)
    });
    total * f.cell_volume()
}

/// `energy_gap(g) - energy_gap(f)` summed from per-cell differences.
///
/// The double-well increment is expanded exactly in `w = g - f`, so the
/// result keeps its relative accuracy when the two fields are close and the
/// difference is far below the rounding of either energy.
pub fn energy_gap_difference(f: &Field, g: &Field) -> crate::error::Result<f64> {
    f.same_grid(g)?;
    let p = f.params();
    let (phi, m) = (p.phi(), p.mean());
    let gm = double_well_prime(m);
    let h = f.h();
    let grad_weight = 0.5 * phi / (h * h);
    let inv_phi = 1.0 / phi;
    let n = f.n();
    let shift = n.trailing_zeros();
    let d = f.d();
    let (u, v) = (f.values(), g.values());
    let total = sum_by(u.len(), |i| {
        let w = v[i] - u[i];
        let mut dg2 = 0.0;
        for axis in 0..d {
            let (plus, _) = neighbours(i, axis, n, shift);
            let a = u[plus] - u[i];
            let da = (v[plus] - u[plus]) - w;
            dg2 += da * (2.0 * a + da);
        }
        let ui = u[i];
        let dwell = w * ((double_well_prime(ui) - gm) + w * (0.5 * (3.0 * ui * ui - 1.0) + w * (ui + 0.25 * w)));
        grad_weight * dg2 + inv_phi * dwell
    });
    Ok(total * f.cell_volume())
}

/// `int |grad u|^2` with the same face differences as [`energy_gap`].
pub fn dirichlet_energy(f: &Field) -> f64 {
    let h = f.h();
    let n = f.n();
    let shift = n.trailing_zeros();
    let d = f.d();
    let u = f.values();
    let total = sum_by(u.len(), |i| {
        let mut g2 = 0.0;
        for axis in 0..d {
            let (plus, _) = neighbours(i, axis, n, shift);
            let du = u[plus] - u[i];
            g2 += du * du;
        }
        g2
    });
    total * f.cell_volume() / (h * h)
}

/// Potential part `(1/phi) int G(u) - G(m) - G'(m)(u - m)` of the energy.
pub fn potential_energy(f: &Field) -> f64 {
    let p = f.params();
    let (phi, m) = (p.phi(), p.mean());
    let u = f.values();
    sum_by(u.len(), |i| well_excess(u[i], m)) * f.cell_volume() / phi
}

/// Periodic `2d + 1`-point Laplacian.
pub fn laplacian(f: &Field) -> Vec<f64> {
    let h2 = f.h() * f.h();
    let n = f.n();
    let shift = n.trailing_zeros();
    let d = f.d();
    let u = f.values();
    let mut out = vec![0.0; u.len()];
    out.par_chunks_mut(4096).enumerate().for_each(|(b, chunk)| {
        let base = b * 4096;
        for (k, slot) in chunk.iter_mut().enumerate() {
            let i = base + k;
            let mut acc = -2.0 * d as f64 * u[i];
            for axis in 0..d {
                let (plus, minus) = neighbours(i, axis, n, shift);
                acc += u[plus] + u[minus];
            }
            *slot = acc / h2;
        }
    });
    out
}

/// Per-cell variational derivative of [`energy_gap`]:
/// `-phi Lap u + (G'(u) - G'(m)) / phi`. Pairing it with a perturbation and
/// the cell volume gives the directional derivative of the energy.
pub fn energy_gradient(f: &Field) -> Field {
    let p = f.params();
    let (phi, m) = (p.phi(), p.mean());
    let gm = double_well_prime(m);
    let inv_phi = 1.0 / phi;
    let u = f.values();
    let mut lap = laplacian(f);
    lap.par_iter_mut().zip(u.par_iter()).for_each(|(l, &ui)| {
        *l = -phi * *l + inv_phi * (double_well_prime(ui) - gm);
    });
    Field::from_parts(*p, f.n(), lap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{uniform_field, ModelParams};
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::new(2, 1.5, 0.04).unwrap()
    }

    #[test]
    fn partition_reference_points() {
        let k = 0.04f64.cbrt();
        assert_eq!(chi_partition(-1.0, k), (1.0, 0.0, 0.0));
        assert_eq!(chi_partition(0.0, k), (0.0, 1.0, 0.0));
        assert_eq!(chi_partition(1.0, k), (0.0, 0.0, 1.0));
    }

    proptest! {
        #[test]
        fn partition_sums_to_one(t in -2.0f64..2.0, phi in 0.001f64..0.125) {
            let k = phi.cbrt();
            let (a, b, c) = chi_partition(t, k);
            prop_assert_eq!(a + b + c, 1.0);
            prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && (0.0..=1.0).contains(&c));
        }

        #[test]
        fn chi3_is_monotone(s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let k = 0.04f64.cbrt();
            if s <= t {
                prop_assert!(chi3(s, k) <= chi3(t, k));
            }
        }
    }

    #[test]
    fn uniform_state_is_zero_energy() {
        let f = uniform_field(params(), 64).unwrap();
        assert_eq!(energy_gap(&f), 0.0);
        assert_eq!(nu(&f), 0.0);
        assert!(energy_gradient(&f).values().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn full_torus_volume() {
        let p = params();
        let f = Field::constant(p, 64, 1.0).unwrap();
        let expected = 1.5f64.powi(3) / 0.04;
        assert!((nu(&f) / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_field_energy_closed_form() {
        let p = params();
        let m = p.mean();
        for c in [-0.5, 0.0, 0.3, 1.0] {
            let f = Field::constant(p, 32, c).unwrap();
            let w = double_well(c) - double_well(m) - double_well_prime(m) * (c - m);
            let expected = 1.5f64.powi(3) / (0.04 * 0.04) * w;
            assert!((energy_gap(&f) / expected - 1.0).abs() < 1e-10, "c={c}");
        }
    }

    #[test]
    fn excess_polynomial_matches_definition() {
        let m = -0.96;
        for u in [-1.2, -0.9, 0.0, 0.7, 1.1] {
            let direct = double_well(u) - double_well(m) - double_well_prime(m) * (u - m);
            assert!((well_excess(u, m) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn difference_matches_energies() {
        let p = params();
        let f = Field::from_fn(p, 64, |x| p.mean() + 0.8 * (0.7 * x[0]).sin() * (0.5 * x[1]).cos()).unwrap();
        let g = Field::from_fn(p, 64, |x| {
            p.mean() + 0.8 * (0.7 * x[0]).sin() * (0.5 * x[1]).cos() + 0.3 * (0.2 * x[1]).sin()
        })
        .unwrap();
        let direct = energy_gap(&g) - energy_gap(&f);
        let diff = energy_gap_difference(&f, &g).unwrap();
        assert!((diff - direct).abs() <= 1e-10 * energy_gap(&f).abs(), "{diff} vs {direct}");
        assert_eq!(energy_gap_difference(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_laplacian_eigenvalue() {
        let p = params();
        let n = 64;
        let ell = p.ell();
        let a = 0.1;
        let f = Field::from_fn(p, n, |x| p.mean() + a * (2.0 * std::f64::consts::PI * x[0] / ell).cos()).unwrap();
        let h = f.h();
        let eig = 2.0 * (1.0 - (2.0 * std::f64::consts::PI * h / ell).cos()) / (h * h);
        let lap = laplacian(&f);
        for (i, &l) in lap.iter().enumerate() {
            let dev = f.values()[i] - p.mean();
            assert!((l + eig * dev).abs() < 1e-9, "cell {i}");
        }
    }
}
