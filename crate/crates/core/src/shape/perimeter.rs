//! Contour length by marching squares on the bilinear interpolant.

use super::{require_2d, Mask};
use crate::error::Result;
use crate::field::Field;

/// Length of the `s`-level contour of a periodic `n x n` grid of samples
/// with spacing `h`. Inside means `value > s`; ambiguous saddle squares are
/// resolved by the mean of the four corners.
pub fn perimeter_of_values(values: &[f64], n: usize, h: f64, s: f64) -> f64 {
    let mut total = 0.0;
    for y in 0..n {
        let y1 = (y + 1) % n;
        let mut row = 0.0;
        for x in 0..n {
            let x1 = (x + 1) % n;
            let v = [values[x + n * y], values[x1 + n * y], values[x1 + n * y1], values[x + n * y1]];
            row += square_length(v, s);
        }
        total += row;
    }
    total * h
}

// Corners counter-clockwise from (0,0); edge k joins corner k and k+1.
const CORNER: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

fn crossing(v: &[f64; 4], edge: usize, s: f64) -> (f64, f64) {
    let (a, b) = (edge, (edge + 1) % 4);
    let t = (s - v[a]) / (v[b] - v[a]);
    let (pa, pb) = (CORNER[a], CORNER[b]);
    (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
}

fn seg(v: &[f64; 4], e1: usize, e2: usize, s: f64) -> f64 {
    let p = crossing(v, e1, s);
    let q = crossing(v, e2, s);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

fn square_length(v: [f64; 4], s: f64) -> f64 {
    let inside = [v[0] > s, v[1] > s, v[2] > s, v[3] > s];
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 || count == 4 {
        return 0.0;
    }
    let crosses: Vec<usize> = (0..4).filter(|&e| inside[e] != inside[(e + 1) % 4]).collect();
    if crosses.len() == 2 {
        return seg(&v, crosses[0], crosses[1], s);
    }
    // Saddle: two diagonal corners inside. Corners whose state differs from
    // the centre are cut off by one segment each, between their two edges.
    let centre_inside = 0.25 * (v[0] + v[1] + v[2] + v[3]) > s;
    let mut len = 0.0;
    for (c, &corner) in inside.iter().enumerate() {
        if corner != centre_inside {
            len += seg(&v, (c + 3) % 4, c, s);
        }
    }
    len
}

/// Perimeter of `{u > s}` for a two-dimensional field.
pub fn perimeter(f: &Field, s: f64) -> Result<f64> {
    require_2d(f)?;
    Ok(perimeter_of_values(f.values(), f.n(), f.h(), s))
}

/// Perimeter of a mask: its indicator contoured at one half.
pub fn mask_perimeter(m: &Mask) -> f64 {
    perimeter_of_values(&m.indicator(), m.n(), m.h(), 0.5)
}
