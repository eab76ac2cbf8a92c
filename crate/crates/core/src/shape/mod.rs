//! Geometry of superlevel sets of two-dimensional fields.

mod bonnesen;
mod fraenkel;
mod isoperimetry;
mod perimeter;
mod report;

pub use bonnesen::{bonnesen_check, bonnesen_radii, minimal_enclosing_circle, BonnesenRadii};
pub use fraenkel::{fraenkel_asymmetry, fraenkel_asymmetry_with_center, rasterized_ball};
pub use isoperimetry::{
    check_isoperimetric, defect_levels, defect_weight, isoperimetric_defect, IsoperimetricCheck, IsoperimetricForm,
    IsoperimetricStatus, SHARP_CONSTANT_2D, SLACK, SMALL_SET_FRACTION,
};
pub use perimeter::{mask_perimeter, perimeter, perimeter_of_values};
pub use report::{shape_report, LevelRecord, ShapeReport};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::numeric::unit_sphere_area;

/// Binary subset of a periodic `n x n` grid with spacing `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    n: usize,
    h_bits: u64,
    cells: Vec<bool>,
}

impl Mask {
    pub fn new(n: usize, h: f64, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::GridMismatch(format!("mask needs {} cells, got {}", n * n, cells.len())));
        }
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Config(format!("mask side must be a power of two, got {n}")));
        }
        if !(h > 0.0) {
            return Err(Error::domain(format!("mask spacing must be positive, got {h}")));
        }
        Ok(Self { n, h_bits: h.to_bits(), cells })
    }

    /// Mask from a predicate on `(x, y)` indices.
    pub fn from_fn(n: usize, h: f64, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let cells = (0..n * n).map(|i| f(i % n, i / n)).collect();
        Mask::new(n, h, cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        f64::from_bits(self.h_bits)
    }

    /// Side of the torus, `n h`.
    pub fn ell(&self) -> f64 {
        self.n as f64 * self.h()
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[(x % self.n) + self.n * (y % self.n)]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// `count * h^2`.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h() * self.h()
    }

    pub fn torus_area(&self) -> f64 {
        self.ell() * self.ell()
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.n == other.n && self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    /// Indicator as `1.0` / `0.0` values.
    pub fn indicator(&self) -> Vec<f64> {
        self.cells.iter().map(|&c| if c { 1.0 } else { 0.0 }).collect()
    }

    /// Cyclic shift: `out(i) = self(i - shift)`.
    pub fn shifted(&self, sx: usize, sy: usize) -> Mask {
        let n = self.n;
        let cells = (0..n * n)
            .map(|i| {
                let (x, y) = (i % n, i / n);
                self.get(x + n - sx % n, y + n - sy % n)
            })
            .collect();
        Mask { n, h_bits: self.h_bits, cells }
    }
}

/// `{u > s}` of a two-dimensional field.
pub fn superlevel_mask(f: &Field, s: f64) -> Result<Mask> {
    require_2d(f)?;
    Mask::new(f.n(), f.h(), f.values().iter().map(|&v| v > s).collect())
}

pub(crate) fn require_2d(f: &Field) -> Result<()> {
    if f.d() != 2 {
        return Err(Error::UnsupportedDimension(f.d()));
    }
    Ok(())
}

/// Euclidean isoperimetric function: perimeter of the ball with volume `area`.
pub fn p_e(area: f64, d: usize) -> f64 {
    let df = d as f64;
    unit_sphere_area(d).powf(1.0 / df) * df.powf((df - 1.0) / df) * area.max(0.0).powf((df - 1.0) / df)
}
