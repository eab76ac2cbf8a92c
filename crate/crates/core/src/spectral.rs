//! Multi-dimensional FFTs on periodic power-of-two grids and the cyclic
//! cross-correlation built on them.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place unnormalised d-dimensional DFT of a row-major (x fastest) grid.
pub(crate) fn fft_nd(buf: &mut [Complex<f64>], n: usize, d: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    // Axis 0 is contiguous: the planner processes consecutive rows.
    fft.process(buf);
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for axis in 1..d {
        let stride = n.pow(axis as u32);
        let block = stride * n;
        for start in (0..buf.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = buf[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    buf[base + k * stride] = *v;
                }
            }
        }
    }
}

/// `c(s) = sum_i a(i) b(i - s)` for every lattice shift `s`.
pub(crate) fn cyclic_cross_correlation(a: &[f64], b: &[f64], n: usize, d: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    let mut fa: Vec<Complex<f64>> = a.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft_nd(&mut fa, n, d, false);
    fft_nd(&mut fb, n, d, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y.conj();
    }
    fft_nd(&mut fa, n, d, true);
    let scale = 1.0 / a.len() as f64;
    fa.into_iter().map(|z| z.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n * n];
        for sy in 0..n {
            for sx in 0..n {
                let mut acc = 0.0;
                for y in 0..n {
                    for x in 0..n {
                        let bx = (x + n - sx) % n;
                        let by = (y + n - sy) % n;
                        acc += a[x + n * y] * b[bx + n * by];
                    }
                }
                out[sx + n * sy] = acc;
            }
        }
        out
    }

    #[test]
    fn correlation_matches_brute_force() {
        let n = 8;
        let a: Vec<f64> = (0..n * n).map(|i| ((i * 7 % 11) as f64).sin()).collect();
        let b: Vec<f64> = (0..n * n).map(|i| ((i * 3 % 13) as f64).cos()).collect();
        let fast = cyclic_cross_correlation(&a, &b, n, 2);
        let slow = brute(&a, &b, n);
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn three_dimensional_round_trip() {
        let n = 4;
        let orig: Vec<Complex<f64>> = (0..64).map(|i| Complex::new(i as f64, -(i as f64) * 0.5)).collect();
        let mut buf = orig.clone();
        fft_nd(&mut buf, n, 3, false);
        fft_nd(&mut buf, n, 3, true);
        for (x, y) in buf.iter().zip(&orig) {
            assert!((x / 64.0 - y).norm() < 1e-12);
        }
    }
}
