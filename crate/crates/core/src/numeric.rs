//! Small numerical building blocks shared by the rest of the crate:
//! deterministic reductions, the Gamma function and bracketed bisection.

use rayon::prelude::*;

/// Block length of the leaf sums in [`sum_by`].
const BLOCK: usize = 1024;

/// Pairwise (tree) summation of a slice. The association order depends only
/// on the slice length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Neumaier-compensated running sum, accurate to a few ulps of the total
/// unless the terms cancel catastrophically.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    values.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

/// Sums `term(i)` for `i in 0..len`.
///
/// The index range is cut into fixed blocks of [`BLOCK`] cells. Blocks are
/// summed left to right with compensation and the block sums are combined in
/// order, so the result is bitwise reproducible whatever the rayon thread
/// count. Compensation matters: constraint residuals near 1e-15 are read off
/// sums of order 1e4.
pub fn sum_by<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let blocks = len.div_ceil(BLOCK);
    if blocks <= 1 {
        return compensated_sum((0..len).map(&term));
    }
    let partial: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let end = ((b + 1) * BLOCK).min(len);
            compensated_sum((b * BLOCK..end).map(&term))
        })
        .collect();
    compensated_sum(partial)
}

/// Same as [`sum_by`] for two accumulators at once.
pub fn sum2_by<F>(len: usize, term: F) -> (f64, f64)
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    let blocks = len.div_ceil(BLOCK).max(1);
    let partial: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let end = ((b + 1) * BLOCK).min(len);
            let (mut x, mut y) = (Compensated::default(), Compensated::default());
            for i in b * BLOCK..end {
                let (a, c) = term(i);
                x.add(a);
                y.add(c);
            }
            (x.value(), y.value())
        })
        .collect();
    (compensated_sum(partial.iter().map(|p| p.0)), compensated_sum(partial.iter().map(|p| p.1)))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (g = 7, nine terms), with
/// reflection for arguments below one half.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Surface area of the unit (d-1)-sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
pub fn unit_sphere_area(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma(half)
}

/// Volume of the unit ball in R^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    unit_sphere_area(d) / d as f64
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`. Returns `None` when the endpoints do not
/// bracket a root.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    // Terminates in at most ~1100 halvings even for a degenerate tolerance.
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Cubic smoothstep 3x^2 - 2x^3 on [0, 1], clamped outside.
#[inline]
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * (3.0 - 2.0 * x)
    }
}

/// Derivative of [`smoothstep`].
#[inline]
pub fn smoothstep_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        6.0 * x * (1.0 - x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_at_integers_and_half_integers() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-13);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(2.5) - 0.75 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn block_sum_is_thread_independent() {
        let n = 70_001;
        let term = |i: usize| ((i as f64) * 0.37).sin();
        let a = sum_by(n, term);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sum_by(n, term));
        assert_eq!(a.to_bits(), b.to_bits());
        let direct: f64 = (0..n).map(term).sum();
        assert!((a - direct).abs() < 1e-9);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn smoothstep_endpoints() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_eq!(smoothstep(0.5), 0.5);
        assert_eq!(smoothstep_prime(0.5), 1.5);
    }
}
