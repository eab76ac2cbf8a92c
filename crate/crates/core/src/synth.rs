//! Seeded synthetic fields and masks for tests, benchmarks and the CLI.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{profile_v, validate_cells, Field, ModelParams, DEFAULT_CUTOFF};
use crate::shape::Mask;

/// Random trigonometric polynomial with all wave vectors `0 < |k|_inf <= kmax`,
/// scaled to sup-norm `amplitude` and centred on the mean `-1 + phi`.
pub fn band_limited_field(p: ModelParams, n: usize, seed: u64, kmax: usize, amplitude: f64) -> Result<Field> {
    validate_cells(n)?;
    let d = p.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 2 * kmax + 1;
    let mut modes = Vec::new();
    for m in 0..side.pow(d as u32) {
        let mut rest = m;
        let k: Vec<i64> = (0..d)
            .map(|_| {
                let c = rest % side;
                rest /= side;
                c as i64 - kmax as i64
            })
            .collect();
        if k.iter().all(|&c| c == 0) {
            continue;
        }
        let a: f64 = rng.random_range(-1.0..1.0);
        let theta: f64 = rng.random_range(0.0..TAU);
        modes.push((k, a * theta.cos(), a * theta.sin()));
    }
    let cos: Vec<f64> = (0..n).map(|j| (TAU * j as f64 / n as f64).cos()).collect();
    let sin: Vec<f64> = (0..n).map(|j| (TAU * j as f64 / n as f64).sin()).collect();
    let len = n.pow(d as u32);
    let ni = n as i64;
    let mut raw = vec![0.0; len];
    let mut coords = vec![0i64; d];
    for (i, slot) in raw.iter_mut().enumerate() {
        let mut rest = i;
        for c in coords.iter_mut() {
            *c = (rest % n) as i64;
            rest /= n;
        }
        let mut v = 0.0;
        for (k, ac, as_) in &modes {
            let idx = k.iter().zip(&coords).map(|(a, b)| a * b).sum::<i64>().rem_euclid(ni) as usize;
            v += ac * cos[idx] - as_ * sin[idx];
        }
        *slot = v;
    }
    let sup = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if sup > 0.0 { amplitude / sup } else { 0.0 };
    let mean = p.mean();
    Field::new(p, n, raw.into_iter().map(|v| mean + scale * v).collect())
}

/// Simply connected random blob: Eden growth from the centre cell up to a
/// random size in `[0.2, 0.9] * max_fraction` of the grid, followed by filling
/// every complement component not 4-connected to the corner cell.
pub fn random_blob_mask(n: usize, h: f64, seed: u64, max_fraction: f64) -> Result<Mask> {
    if !(max_fraction > 0.0 && max_fraction < 0.25) {
        return Err(Error::domain(format!("blob fraction must lie in (0, 0.25), got {max_fraction}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = n * n;
    let target = ((rng.random_range(0.2..=0.9) * max_fraction * total as f64) as usize).max(1);
    let mut cells = vec![false; total];
    let mut queued = vec![false; total];
    let start = n / 2 + n * (n / 2);
    let mut frontier = vec![start];
    queued[start] = true;
    let mut count = 0;
    while count < target && !frontier.is_empty() {
        let i = frontier.swap_remove(rng.random_range(0..frontier.len()));
        cells[i] = true;
        count += 1;
        for j in neighbours4(i, n) {
            if !queued[j] {
                queued[j] = true;
                frontier.push(j);
            }
        }
    }
    let mut outside = vec![false; total];
    let mut queue = VecDeque::from([0usize]);
    outside[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in neighbours4(i, n) {
            if !cells[j] && !outside[j] {
                outside[j] = true;
                queue.push_back(j);
            }
        }
    }
    let filled = outside.into_iter().map(|o| !o).collect();
    Mask::new(n, h, filled)
}

fn neighbours4(i: usize, n: usize) -> [usize; 4] {
    let (x, y) = (i % n, i / n);
    [(x + 1) % n + n * y, (x + n - 1) % n + n * y, x + n * ((y + 1) % n), x + n * ((y + n - 1) % n)]
}

/// Smooth version of the set `{sd > 0}`: the droplet profile applied to the
/// signed function `sd` (positive inside), shifted to the mean `-1 + phi`.
pub fn smooth_set(p: ModelParams, n: usize, sd: impl Fn(&[f64]) -> f64) -> Result<Field> {
    let phi = p.phi();
    let base = Field::from_fn(p, n, |x| profile_v(-sd(x) / phi, DEFAULT_CUTOFF))?;
    let target = p.mean();
    let mut alpha = target - base.mean();
    let mut f = base.clone();
    for _ in 0..3 {
        f = base.with_values(base.values().iter().map(|v| v + alpha).collect())?;
        let err = f.mean() - target;
        if err.abs() <= 1e-12 {
            break;
        }
        alpha -= err;
    }
    Ok(f)
}

/// Droplet-like field on the ellipse with semi-axes `a` (axis 0) and `b`
/// (axis 1) centred at the origin.
pub fn ellipse_droplet(p: ModelParams, n: usize, a: f64, b: f64) -> Result<Field> {
    if p.d() != 2 {
        return Err(Error::UnsupportedDimension(p.d()));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("ellipse semi-axes must be positive"));
    }
    let scale = (a * b).sqrt();
    smooth_set(p, n, |x| (1.0 - ((x[0] / a).powi(2) + (x[1] / b).powi(2)).sqrt()) * scale)
}

/// Droplet-like field on a crescent: a disk with an off-centre disk removed.
pub fn crescent_field(p: ModelParams, n: usize) -> Result<Field> {
    if p.d() != 2 {
        return Err(Error::UnsupportedDimension(p.d()));
    }
    let ell = p.ell();
    let (r1, r2, c) = (0.22 * ell, 0.18 * ell, 0.12 * ell);
    smooth_set(p, n, |x| {
        let outer = r1 - x[0].hypot(x[1]);
        let inner = (x[0] - c).hypot(x[1]) - r2;
        outer.min(inner)
    })
}
