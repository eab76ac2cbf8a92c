//! Fraenkel asymmetry on the periodic lattice.

use std::f64::consts::PI;

use super::Mask;
use crate::error::{Error, Result};
use crate::spectral::cyclic_cross_correlation;

/// Cells whose centre lies within `radius` of the origin (periodically).
pub fn rasterized_ball(n: usize, h: f64, radius: f64) -> Mask {
    let r2 = radius * radius;
    let half = n as isize / 2;
    let wrap = |c: usize| {
        let c = c as isize;
        if c < half {
            c
        } else {
            c - n as isize
        }
    };
    Mask::from_fn(n, h, |x, y| {
        let (dx, dy) = (wrap(x) as f64 * h, wrap(y) as f64 * h);
        dx * dx + dy * dy <= r2
    })
    .expect("valid mask dimensions")
}

/// `min_x |A symdiff B(x)| / |A|` over all lattice centres `x`, where `B(x)`
/// is the rasterised ball of area `|A|` centred at `x`.
pub fn fraenkel_asymmetry(m: &Mask) -> Result<f64> {
    fraenkel_asymmetry_with_center(m).map(|(l, _)| l)
}

/// Asymmetry together with one optimal centre (smallest linear index among
/// ties).
///
/// Every centre is scanned: the overlaps `|A cap B(x)|` for all `x` are one
/// cyclic cross-correlation of the two indicators, rounded to whole cells.
pub fn fraenkel_asymmetry_with_center(m: &Mask) -> Result<(f64, (usize, usize))> {
    let count = m.count();
    if count == 0 {
        return Err(Error::Geometry("Fraenkel asymmetry of an empty set".into()));
    }
    let n = m.n();
    let h = m.h();
    let area = m.area();
    let radius = (area / PI).sqrt();
    if radius > 0.5 * m.ell() {
        return Err(Error::Geometry(format!(
            "ball of area {area} (radius {radius}) does not fit in a torus of side {}",
            m.ell()
        )));
    }
    let ball = rasterized_ball(n, h, radius);
    let ball_count = ball.count();
    let overlap = cyclic_cross_correlation(&m.indicator(), &ball.indicator(), n, 2);
    let mut best = usize::MAX;
    let mut arg = 0;
    for (i, &o) in overlap.iter().enumerate() {
        let inter = o.round() as usize;
        let sym = count + ball_count - 2 * inter;
        if sym < best {
            best = sym;
            arg = i;
        }
    }
    Ok((best as f64 / count as f64, (arg % n, arg / n)))
}
