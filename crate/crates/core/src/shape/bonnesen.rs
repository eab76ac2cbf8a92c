//! Inner, outer and equal-area radii of a planar set.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mask_perimeter, Mask};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonnesenRadii {
    /// Largest inscribed disk.
    pub rho_in: f64,
    /// Smallest enclosing disk.
    pub rho_out: f64,
    /// Disk of equal area.
    pub rho: f64,
}

/// Radii of a mask. The set is first recentred at its periodic centroid
/// (circular mean per axis) and must then lie strictly inside the central
/// window `(n/4, 3n/4)^2`, where Euclidean distances are unambiguous.
///
/// `rho_in` is the largest centre-to-centre distance from a mask cell to the
/// complement less half a cell; `rho_out` is the minimal enclosing circle of
/// the boundary cell centres plus half a cell.
pub fn bonnesen_radii(m: &Mask) -> Result<BonnesenRadii> {
    if m.count() == 0 {
        return Err(Error::Geometry("radii of an empty set".into()));
    }
    let n = m.n();
    let h = m.h();
    let centred = recentre(m);
    let (lo, hi) = (n / 4, 3 * n / 4);
    for y in 0..n {
        for x in 0..n {
            if centred.get(x, y) && !(x > lo && x < hi && y > lo && y < hi) {
                return Err(Error::Geometry("set too large for Euclidean radii".into()));
            }
        }
    }

    let dist2 = squared_distance_to_complement(&centred);
    let max_d2 = dist2.iter().copied().fold(0.0, f64::max);
    let rho_in = (max_d2.sqrt() - 0.5) * h;

    let mut boundary = Vec::new();
    for y in 0..n {
        for x in 0..n {
            if centred.get(x, y)
                && (!centred.get(x + 1, y)
                    || !centred.get(x + n - 1, y)
                    || !centred.get(x, y + 1)
                    || !centred.get(x, y + n - 1))
            {
                boundary.push((x as f64 * h, y as f64 * h));
            }
        }
    }
    let (_, r_out) = minimal_enclosing_circle(&boundary);
    let rho_out = r_out + 0.5 * h;
    let rho = (m.area() / PI).sqrt();
    Ok(BonnesenRadii { rho_in, rho_out, rho })
}

/// Bonnesen's lower bound `sqrt(pi (4 |A| + (rho_out - rho_in)^2))` and the
/// measured perimeter of the mask.
pub fn bonnesen_check(m: &Mask) -> Result<(f64, f64)> {
    let r = bonnesen_radii(m)?;
    let bound = (PI * (4.0 * m.area() + (r.rho_out - r.rho_in).powi(2))).sqrt();
    Ok((mask_perimeter(m), bound))
}

/// Shifts the mask so its circular-mean centroid lands on `(n/2, n/2)`.
fn recentre(m: &Mask) -> Mask {
    let n = m.n();
    let w = 2.0 * PI / n as f64;
    let (mut cx, mut sx, mut cy, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for y in 0..n {
        for x in 0..n {
            if m.get(x, y) {
                cx += (w * x as f64).cos();
                sx += (w * x as f64).sin();
                cy += (w * y as f64).cos();
                sy += (w * y as f64).sin();
            }
        }
    }
    let to_index = |s: f64, c: f64| {
        let a = s.atan2(c).rem_euclid(2.0 * PI);
        ((a / w).round() as usize) % n
    };
    let (gx, gy) = (to_index(sx, cx), to_index(sy, cy));
    m.shifted((n / 2 + n - gx) % n, (n / 2 + n - gy) % n)
}

/// Squared distance (in cells) from every cell centre to the nearest
/// complement cell centre, by separable lower envelopes of parabolas.
fn squared_distance_to_complement(m: &Mask) -> Vec<f64> {
    let n = m.n();
    let inf = 1e20;
    let mut grid: Vec<f64> = m.cells().iter().map(|&c| if c { inf } else { 0.0 }).collect();
    let mut line = vec![0.0; n];
    let mut out = vec![0.0; n];
    for x in 0..n {
        for y in 0..n {
            line[y] = grid[x + n * y];
        }
        edt_1d(&line, &mut out);
        for y in 0..n {
            grid[x + n * y] = out[y];
        }
    }
    for y in 0..n {
        line.copy_from_slice(&grid[n * y..n * (y + 1)]);
        edt_1d(&line, &mut out);
        grid[n * y..n * (y + 1)].copy_from_slice(&out);
    }
    grid
}

fn edt_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                break;
            }
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0;
    for (q, slot) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *slot = dq * dq + f[p];
    }
}

/// Smallest circle containing all points (randomised incremental algorithm
/// with a fixed seed). Returns `(centre, radius)`.
pub fn minimal_enclosing_circle(points: &[(f64, f64)]) -> ((f64, f64), f64) {
    if points.is_empty() {
        return ((0.0, 0.0), 0.0);
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let scale = pts.iter().fold(1.0f64, |acc, p| acc.max(p.0.abs()).max(p.1.abs()));
    let eps = 1e-12 * scale;
    let contains = |c: &((f64, f64), f64), p: (f64, f64)| dist(c.0, p) <= c.1 + eps;

    let mut c = (pts[0], 0.0);
    for i in 1..pts.len() {
        if contains(&c, pts[i]) {
            continue;
        }
        c = (pts[i], 0.0);
        for j in 0..i {
            if contains(&c, pts[j]) {
                continue;
            }
            c = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if !contains(&c, pts[k]) {
                    c = circle_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    c
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn circle_two(a: (f64, f64), b: (f64, f64)) -> ((f64, f64), f64) {
    let c = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
    (c, 0.5 * dist(a, b))
}

fn circle_three(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> ((f64, f64), f64) {
    let (bx, by) = (b.0 - a.0, b.1 - a.1);
    let (cx, cy) = (c.0 - a.0, c.1 - a.1);
    let det = 2.0 * (bx * cy - by * cx);
    if det.abs() < 1e-14 * (bx.abs() + by.abs() + cx.abs() + cy.abs()).powi(2) {
        // Collinear: the circle on the two farthest points.
        let cands = [circle_two(a, b), circle_two(a, c), circle_two(b, c)];
        return cands.into_iter().fold(cands[0], |best, x| if x.1 > best.1 { x } else { best });
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / det;
    let uy = (bx * c2 - cx * b2) / det;
    ((a.0 + ux, a.1 + uy), (ux * ux + uy * uy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::rasterized_ball;

    #[test]
    fn enclosing_circle_of_square_corners() {
        let pts = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)];
        let (c, r) = minimal_enclosing_circle(&pts);
        assert!((c.0 - 1.0).abs() < 1e-12 && (c.1 - 1.0).abs() < 1e-12);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn enclosing_circle_collinear() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)];
        let (c, r) = minimal_enclosing_circle(&pts);
        assert!((c.0 - 1.5).abs() < 1e-12 && (r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn edt_matches_brute_force() {
        let m = Mask::from_fn(32, 1.0, |x, y| {
            let (dx, dy) = (x as f64 - 15.0, y as f64 - 14.0);
            dx * dx / 40.0 + dy * dy / 15.0 < 1.0 || (x == 20 && y < 20 && y > 8)
        })
        .unwrap();
        let fast = squared_distance_to_complement(&m);
        for y in 0..32 {
            for x in 0..32 {
                let mut best = f64::INFINITY;
                for yy in 0..32 {
                    for xx in 0..32 {
                        if !m.get(xx, yy) {
                            let d = (x as f64 - xx as f64).powi(2) + (y as f64 - yy as f64).powi(2);
                            best = best.min(d);
                        }
                    }
                }
                assert_eq!(fast[x + 32 * y], best, "cell ({x}, {y})");
            }
        }
    }

    #[test]
    fn disk_radii() {
        let h = 0.04;
        let r = 0.9;
        let m = rasterized_ball(256, h, r).shifted(7, 250);
        let b = bonnesen_radii(&m).unwrap();
        for v in [b.rho_in, b.rho_out, b.rho] {
            assert!((v - r).abs() <= 2.0 * h, "{b:?}");
        }
        assert!(b.rho_out - b.rho_in <= 2.0 * h);
    }

    #[test]
    fn rectangle_radii() {
        let h = 0.05;
        let (a, bb) = (60usize, 24usize);
        let m = Mask::from_fn(256, h, |x, y| (100..100 + a).contains(&x) && (120..120 + bb).contains(&y)).unwrap();
        let r = bonnesen_radii(&m).unwrap();
        let (af, bf) = (a as f64 * h, bb as f64 * h);
        assert!((r.rho_in - bf / 2.0).abs() <= 2.0 * h, "{r:?}");
        assert!((r.rho_out - (af * af + bf * bf).sqrt() / 2.0).abs() <= 2.0 * h, "{r:?}");
    }

    #[test]
    fn window_violation() {
        let m = Mask::from_fn(64, 0.1, |x, _| x < 40).unwrap();
        assert!(matches!(bonnesen_radii(&m), Err(Error::Geometry(_))));
    }
}
