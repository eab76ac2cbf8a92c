//! Discrete Steiner symmetrisation on the periodic grid.
//!
//! Every line along an axis is replaced by its symmetric-decreasing
//! rearrangement about index 0: the values are sorted in decreasing order
//! and placed at indices `0, +1, -1, +2, -2, ...`, with the unpaired cell
//! `n/2` last. Equal values keep their input order, so the first of a tie
//! goes to the `+` side.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{dirichlet_energy, energy_gap, l2_dist_mod_translation, potential_energy, Field};

/// Index of the `k`-th largest value in a symmetric-decreasing line.
#[inline]
pub fn placement(k: usize, n: usize) -> usize {
    if k == 0 {
        0
    } else if k == n - 1 && n % 2 == 0 {
        n / 2
    } else if k % 2 == 1 {
        k.div_ceil(2)
    } else {
        n - k / 2
    }
}

/// `h * #{j : line[j] > t}`.
pub fn distribution_mu(line: &[f64], t: f64, h: f64) -> f64 {
    h * line.iter().filter(|&&v| v > t).count() as f64
}

/// Symmetric-decreasing rearrangement of one periodic line.
pub fn rearrange_line(line: &[f64]) -> Vec<f64> {
    let n = line.len();
    let mut sorted = line.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; n];
    for (k, v) in sorted.into_iter().enumerate() {
        out[placement(k, n)] = v;
    }
    out
}

/// True when the line is nonincreasing along the placement order, i.e. it
/// is its own rearrangement.
pub fn is_symmetric_decreasing(line: &[f64]) -> bool {
    let n = line.len();
    (1..n).all(|k| line[placement(k, n)] <= line[placement(k - 1, n)])
}

fn check_axis(f: &Field, axis: usize) -> Result<()> {
    if axis >= f.d() {
        return Err(Error::domain(format!("axis {axis} out of range for d = {}", f.d())));
    }
    Ok(())
}

/// Start index and stride of every line along `axis`.
fn lines(f: &Field, axis: usize) -> (Vec<usize>, usize) {
    let n = f.n();
    let stride = n.pow(axis as u32);
    let count = f.len() / n;
    let starts = (0..count).map(|j| j % stride + (j / stride) * stride * n).collect();
    (starts, stride)
}

fn gather(values: &[f64], start: usize, stride: usize, n: usize) -> Vec<f64> {
    (0..n).map(|k| values[start + k * stride]).collect()
}

/// Rearranges every line along `axis`.
pub fn symmetrize_axis(f: &Field, axis: usize) -> Result<Field> {
    check_axis(f, axis)?;
    let n = f.n();
    let (starts, stride) = lines(f, axis);
    let values = f.values();
    let rearranged: Vec<Vec<f64>> = starts.par_iter().map(|&s| rearrange_line(&gather(values, s, stride, n))).collect();
    let mut out = vec![0.0; f.len()];
    for (&s, line) in starts.iter().zip(&rearranged) {
        for (k, &v) in line.iter().enumerate() {
            out[s + k * stride] = v;
        }
    }
    f.with_values(out)
}

/// `S_d o ... o S_1`: axes are symmetrised in ascending order.
pub fn steiner_symmetrize(f: &Field) -> Field {
    (0..f.d()).fold(f.clone(), |g, axis| symmetrize_axis(&g, axis).expect("axis below d"))
}

/// Whether every line along every axis is symmetric-decreasing about 0.
pub fn has_monotone_lines(f: &Field) -> bool {
    let n = f.n();
    (0..f.d()).all(|axis| {
        let (starts, stride) = lines(f, axis);
        starts.par_iter().all(|&s| is_symmetric_decreasing(&gather(f.values(), s, stride, n)))
    })
}

/// Whether `f`, moved by the lattice shift that best aligns it with its
/// symmetrisation, is within `tol` of that symmetrisation in the sup norm.
pub fn is_steiner_symmetric(f: &Field, tol: f64) -> bool {
    let g = steiner_symmetrize(f);
    let (_, shift) = l2_dist_mod_translation(&g, f).expect("same grid");
    let moved = f.shifted(&shift);
    let sup = moved.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    sup <= tol
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDecrease {
    pub before: f64,
    pub after: f64,
    pub dirichlet_before: f64,
    pub dirichlet_after: f64,
    pub potential_before: f64,
    pub potential_after: f64,
}

impl EnergyDecrease {
    pub fn to_csv(&self) -> String {
        format!(
            "before,after,dirichlet_before,dirichlet_after,potential_before,potential_after\n{},{},{},{},{},{}\n",
            self.before,
            self.after,
            self.dirichlet_before,
            self.dirichlet_after,
            self.potential_before,
            self.potential_after
        )
    }
}

/// Energy gap and its two parts before and after full symmetrisation.
pub fn energy_decrease_report(f: &Field) -> EnergyDecrease {
    let g = steiner_symmetrize(f);
    EnergyDecrease {
        before: energy_gap(f),
        after: energy_gap(&g),
        dirichlet_before: dirichlet_energy(f),
        dirichlet_after: dirichlet_energy(&g),
        potential_before: potential_energy(f),
        potential_after: potential_energy(&g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{droplet, nu, uniform_field, ModelParams, DEFAULT_CUTOFF};
    use crate::synth::{band_limited_field, crescent_field, ellipse_droplet};
    use proptest::prelude::*;

    fn params() -> ModelParams {
        ModelParams::new(2, 1.5, 0.04).unwrap()
    }

    #[test]
    fn placement_is_a_permutation() {
        for n in [1usize, 2, 3, 4, 7, 8, 32] {
            let mut seen: Vec<usize> = (0..n).map(|k| placement(k, n)).collect();
            seen.sort();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
        }
        assert_eq!((0..4).map(|k| placement(k, 4)).collect::<Vec<_>>(), vec![0, 1, 3, 2]);
    }

    #[test]
    fn distribution_function() {
        let line = [2.0; 8];
        assert_eq!(distribution_mu(&line, 1.0, 0.5), 4.0);
        assert_eq!(distribution_mu(&line, 2.0, 0.5), 0.0);
        let ramp: Vec<f64> = (0..16).map(|j| j as f64).collect();
        let mu = distribution_mu(&ramp, 7.5, 0.25);
        assert!((mu - 2.0).abs() <= 0.25);
    }

    #[test]
    fn ties_fill_plus_side_first() {
        let out = rearrange_line(&[1.0, 3.0, 3.0, 0.0]);
        assert_eq!(out, vec![3.0, 3.0, 0.0, 1.0]);
        assert!(is_symmetric_decreasing(&out));
    }

    proptest! {
        #[test]
        fn line_rearrangement_properties(line in prop::collection::vec(-2.0f64..2.0, 1..40)) {
            let out = rearrange_line(&line);
            let mut a = line.clone();
            let mut b = out.clone();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
            prop_assert!(is_symmetric_decreasing(&out));
            prop_assert_eq!(rearrange_line(&out), out);
        }
    }

    #[test]
    fn smooth_line_dirichlet_does_not_grow() {
        let n = 64;
        for seed in 0..20u64 {
            let line: Vec<f64> = (0..n)
                .map(|j| {
                    let x = j as f64 * std::f64::consts::TAU / n as f64;
                    (x + seed as f64).sin() + 0.3 * (3.0 * x + 0.7 * seed as f64).cos()
                })
                .collect();
            let dir = |l: &[f64]| (0..n).map(|j| (l[(j + 1) % n] - l[j]).powi(2)).sum::<f64>();
            let out = rearrange_line(&line);
            assert!(dir(&out) <= dir(&line) + 1e-12);
        }
    }

    #[test]
    fn idempotent_and_equimeasurable() {
        let f = band_limited_field(params(), 64, 3, 4, 0.5).unwrap();
        let g = steiner_symmetrize(&f);
        let gg = steiner_symmetrize(&g);
        assert_eq!(g.values(), gg.values());
        assert!(has_monotone_lines(&g));
        assert!(is_steiner_symmetric(&g, 1e-12));
        assert!((f.mean() - g.mean()).abs() <= 1e-12);
        assert!((nu(&f) - nu(&g)).abs() <= 1e-12);
    }

    #[test]
    fn shifted_droplet_is_recentred() {
        let p = params();
        let f = droplet(0.8, p, 128, DEFAULT_CUTOFF).unwrap();
        let moved = f.shifted(&[17, 101]);
        let g = steiner_symmetrize(&moved);
        let (dist, _) = l2_dist_mod_translation(&g, &f).unwrap();
        assert!(dist <= 1e-12, "{dist}");
        assert!(is_steiner_symmetric(&moved, 1e-12));
    }

    #[test]
    fn ellipse_and_crescent() {
        let p = params();
        let e = ellipse_droplet(p, 128, 1.0, 0.5).unwrap();
        assert!(is_steiner_symmetric(&e, 1e-12));
        let c = crescent_field(p, 128).unwrap();
        assert!(!is_steiner_symmetric(&c, 1e-3));
    }

    #[test]
    fn uniform_report_is_zero() {
        let r = energy_decrease_report(&uniform_field(params(), 32).unwrap());
        assert_eq!((r.before, r.after, r.dirichlet_before, r.dirichlet_after), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn potential_is_preserved() {
        let f = band_limited_field(params(), 64, 11, 3, 0.8).unwrap();
        let r = energy_decrease_report(&f);
        assert!((r.potential_before - r.potential_after).abs() <= 1e-12);
        assert!(r.dirichlet_after <= r.dirichlet_before + 1e-9);
        assert!(r.to_csv().ends_with('\n'));
    }

    #[test]
    fn bad_axis() {
        let f = uniform_field(params(), 32).unwrap();
        assert!(symmetrize_axis(&f, 2).is_err());
    }
}
