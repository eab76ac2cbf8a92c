//! Periodic-grid scalar fields in the critical scaling.
//!
//! A field lives on the rescaled torus `[0, ell)^d` with `ell` chosen so that
//! `phi * ell^d = xi^{d+1}`. Cell `i` along an axis sits at coordinate
//! `i * h` (`h = ell / n`), so index 0 is the origin and indices above `n/2`
//! represent negative coordinates. Values are stored row-major, x fastest.

mod distance;
mod droplet;
mod energy;
mod io;

pub use distance::{l2_dist, l2_dist_mod_translation};
pub use droplet::{
    droplet, droplet_with_center, make_sharp_profile, path_point, profile_v, volume_matched_droplet, PathSpec,
    SharpProfile, DEFAULT_CUTOFF,
};
pub(crate) use energy::nu_of_values;
pub use energy::{
    chi3, chi3_prime, chi_partition, dirichlet_energy, double_well, double_well_prime, energy_gap,
    energy_gap_difference, energy_gradient, laplacian, nu, potential_energy,
};
pub use io::{decode_field, encode_field, read_field, write_field, MAGIC, VERSION};

use crate::error::{Error, Result};
use crate::limit_model::LimitParams;
use crate::numeric::sum_by;

/// Smallest and largest supported cells per axis.
pub const MIN_CELLS: usize = 32;
pub const MAX_CELLS: usize = 1024;

/// Dimension, reduced system size `xi` and interface parameter `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    d: usize,
    xi: f64,
    phi: f64,
}

impl ModelParams {
    pub fn new(d: usize, xi: f64, phi: f64) -> Result<Self> {
        if !(d == 2 || d == 3) {
            return Err(Error::Config(format!("grids support d in {{2, 3}}, got {d}")));
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::Config(format!("xi must be positive, got {xi}")));
        }
        if !(phi > 0.0 && phi <= 0.25) {
            return Err(Error::Config(format!("phi must lie in (0, 0.25], got {phi}")));
        }
        Ok(Self { d, xi, phi })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `kappa = phi^{1/3}`, the width of the bands of the partition of unity.
    pub fn kappa(&self) -> f64 {
        self.phi.cbrt()
    }

    /// The prescribed mean `m = -1 + phi`.
    pub fn mean(&self) -> f64 {
        -1.0 + self.phi
    }

    /// Side of the rescaled torus, `xi^{(d+1)/d} phi^{-1/d}`.
    pub fn ell(&self) -> f64 {
        let df = self.d as f64;
        self.xi.powf((df + 1.0) / df) * self.phi.powf(-1.0 / df)
    }

    /// `|T| = ell^d`, equal to `xi^{d+1} / phi`.
    pub fn torus_volume(&self) -> f64 {
        self.ell().powi(self.d as i32)
    }

    pub fn limit(&self) -> LimitParams {
        LimitParams::new(self.d, self.xi).expect("validated parameters")
    }
}

/// Checks that `n` is a power of two within the supported range.
pub fn validate_cells(n: usize) -> Result<()> {
    if !n.is_power_of_two() || !(MIN_CELLS..=MAX_CELLS).contains(&n) {
        return Err(Error::Config(format!(
            "cells per axis must be a power of two in [{MIN_CELLS}, {MAX_CELLS}], got {n}"
        )));
    }
    Ok(())
}

/// A scalar function sampled at the cell centres of a periodic `n^d` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    params: ModelParams,
    n: usize,
    values: Vec<f64>,
}

impl Field {
    /// Builds a field, checking grid size and finiteness.
    pub fn new(params: ModelParams, n: usize, values: Vec<f64>) -> Result<Self> {
        validate_cells(n)?;
        let len = n.pow(params.d as u32);
        if values.len() != len {
            return Err(Error::GridMismatch(format!("expected {len} values, got {}", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite value at cell {i}")));
        }
        Ok(Self { params, n, values })
    }

    pub(crate) fn from_parts(params: ModelParams, n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n.pow(params.d as u32));
        Self { params, n, values }
    }

    /// Constant field.
    pub fn constant(params: ModelParams, n: usize, value: f64) -> Result<Self> {
        validate_cells(n)?;
        Field::new(params, n, vec![value; n.pow(params.d as u32)])
    }

    /// Fills the grid from a function of the cell coordinates, each reduced
    /// to the signed range `[-ell/2, ell/2)`.
    pub fn from_fn<F>(params: ModelParams, n: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        validate_cells(n)?;
        let h = params.ell() / n as f64;
        let d = params.d;
        let len = n.pow(d as u32);
        let mut values = Vec::with_capacity(len);
        let mut x = vec![0.0; d];
        for i in 0..len {
            let mut rest = i;
            for xk in x.iter_mut() {
                let c = rest % n;
                rest /= n;
                *xk = signed_index(c, n) as f64 * h;
            }
            values.push(f(&x));
        }
        Field::new(params, n, values)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `ell / n`.
    pub fn h(&self) -> f64 {
        self.params.ell() / self.n as f64
    }

    /// Volume of one cell, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.params.d as i32)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Replaces the values, keeping grid and parameters.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Field::new(self.params, self.n, values)
    }

    /// Spatial mean, reduced in a fixed order.
    pub fn mean(&self) -> f64 {
        let v = &self.values;
        sum_by(v.len(), |i| v[i]) / v.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Linear index of a multi-index.
    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.n + c % self.n)
    }

    /// Multi-index of a linear index.
    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        (0..self.params.d)
            .map(|_| {
                let c = i % self.n;
                i /= self.n;
                c
            })
            .collect()
    }

    pub fn get(&self, coords: &[usize]) -> f64 {
        self.values[self.index(coords)]
    }

    /// Cyclic lattice shift: `out(i) = self(i - shift)`.
    pub fn shifted(&self, shift: &[usize]) -> Field {
        let n = self.n;
        let d = self.params.d;
        assert_eq!(shift.len(), d, "shift must have one entry per axis");
        let mut out = vec![0.0; self.values.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut rest = i;
            let mut src = 0;
            let mut stride = 1;
            for &s in shift.iter() {
                let c = rest % n;
                rest /= n;
                src += ((c + n - s % n) % n) * stride;
                stride *= n;
            }
            *slot = self.values[src];
        }
        Field::from_parts(self.params, n, out)
    }

    /// Swaps two axes of the grid (a 90 degree rotation up to reflection).
    pub fn transposed(&self, a: usize, b: usize) -> Field {
        let len = self.values.len();
        let mut out = vec![0.0; len];
        for (i, &v) in self.values.iter().enumerate() {
            let mut c = self.coords(i);
            c.swap(a, b);
            out[self.index(&c)] = v;
        }
        Field::from_parts(self.params, self.n, out)
    }

    /// Reverses one axis about index 0.
    pub fn reflected(&self, axis: usize) -> Field {
        let len = self.values.len();
        let mut out = vec![0.0; len];
        for (i, &v) in self.values.iter().enumerate() {
            let mut c = self.coords(i);
            c[axis] = (self.n - c[axis]) % self.n;
            out[self.index(&c)] = v;
        }
        Field::from_parts(self.params, self.n, out)
    }

    pub(crate) fn same_grid(&self, other: &Field) -> Result<()> {
        if self.n != other.n || self.params.d != other.params.d {
            return Err(Error::GridMismatch(format!(
                "grids differ: n={} d={} vs n={} d={}",
                self.n, self.params.d, other.n, other.params.d
            )));
        }
        Ok(())
    }
}

/// Uniform state `u = -1 + phi`.
pub fn uniform_field(params: ModelParams, n: usize) -> Result<Field> {
    Field::constant(params, n, params.mean())
}

/// Maps an index in `[0, n)` to the signed range `[-n/2, n/2)`.
#[inline]
pub fn signed_index(c: usize, n: usize) -> isize {
    if c < n / 2 {
        c as isize
    } else {
        c as isize - n as isize
    }
}

/// Neighbour offsets along every axis for the cell at linear index `i`
/// on a power-of-two grid: `(plus, minus)` linear indices.
#[inline]
pub(crate) fn neighbours(i: usize, axis: usize, n: usize, shift: u32) -> (usize, usize) {
    let stride = 1usize << (shift * axis as u32);
    let c = (i >> (shift * axis as u32)) & (n - 1);
    let plus = if c == n - 1 { i - (n - 1) * stride } else { i + stride };
    let minus = if c == 0 { i + (n - 1) * stride } else { i - stride };
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(2, 1.5, 0.04).unwrap()
    }

    #[test]
    fn critical_scaling_identity() {
        for d in [2, 3] {
            for phi in [0.01, 0.04, 0.25] {
                let p = ModelParams::new(d, 1.5, phi).unwrap();
                let lhs = phi * p.torus_volume();
                let rhs = 1.5f64.powi(d as i32 + 1);
                assert!((lhs / rhs - 1.0).abs() < 1e-12);
                assert_eq!(p.kappa(), phi.cbrt());
            }
        }
    }

    #[test]
    fn rejects_bad_params_and_grids() {
        assert!(ModelParams::new(4, 1.5, 0.04).is_err());
        assert!(ModelParams::new(2, 1.5, 0.3).is_err());
        assert!(ModelParams::new(2, -1.0, 0.04).is_err());
        assert!(validate_cells(48).is_err());
        assert!(validate_cells(16).is_err());
        assert!(validate_cells(2048).is_err());
        assert!(validate_cells(64).is_ok());
        assert!(Field::new(params(), 32, vec![0.0; 10]).is_err());
        let mut v = vec![0.0; 32 * 32];
        v[5] = f64::NAN;
        assert!(Field::new(params(), 32, v).is_err());
    }

    #[test]
    fn uniform_has_prescribed_mean() {
        let f = uniform_field(params(), 64).unwrap();
        assert!((f.mean() - (-1.0 + 0.04)).abs() <= 1e-13);
    }

    #[test]
    fn shift_composes_and_inverts() {
        let p = params();
        let f = Field::from_fn(p, 32, |x| (x[0] * 0.7).sin() + x[1] * x[1]).unwrap();
        let g = f.shifted(&[3, 30]).shifted(&[29, 2]);
        assert_eq!(f, g);
        let s = f.shifted(&[1, 0]);
        assert_eq!(s.get(&[1, 0]), f.get(&[0, 0]));
        assert_eq!(s.get(&[0, 0]), f.get(&[31, 0]));
    }

    #[test]
    fn neighbours_wrap() {
        let n = 32;
        let (p, m) = neighbours(0, 0, n, 5);
        assert_eq!((p, m), (1, 31));
        let (p, m) = neighbours(31 * 32, 1, n, 5);
        assert_eq!((p, m), (0, 30 * 32));
    }

    #[test]
    fn coordinates_are_signed() {
        let f = Field::from_fn(params(), 32, |x| x[0]).unwrap();
        let h = f.h();
        assert_eq!(f.get(&[0, 0]), 0.0);
        assert_eq!(f.get(&[1, 0]), h);
        assert_eq!(f.get(&[31, 0]), -h);
        assert_eq!(f.get(&[16, 0]), -16.0 * h);
    }
}
