//! Isoperimetric inequalities on the torus as numerical checks, and the
//! level-integrated isoperimetric defect of a field.

use rayon::prelude::*;

use super::{fraenkel_asymmetry, mask_perimeter, p_e, perimeter_of_values, require_2d, Mask};
use crate::error::{Error, Result};
use crate::field::{double_well, Field};

/// Sets larger than this fraction of the torus are outside the small-set
/// regime in which the inequalities are checked.
pub const SMALL_SET_FRACTION: f64 = 0.05;

/// Constant in front of `lambda^2 P_E` in the sharp form (d = 2).
pub const SHARP_CONSTANT_2D: f64 = 0.1;

/// Relative discretisation slack allowed before a check counts as violated.
pub const SLACK: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoperimetricForm {
    /// `Per >= P_E`.
    Plain,
    /// `Per >= P_E + C lambda^2 P_E - 4 d |A| / ell`.
    Sharp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoperimetricStatus {
    Holds,
    Violated,
    /// The set is empty or too large for the inequality to apply.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricCheck {
    pub form: IsoperimetricForm,
    pub status: IsoperimetricStatus,
    pub perimeter: f64,
    pub p_e: f64,
    /// Right-hand side of the inequality.
    pub bound: f64,
    /// `(perimeter - bound) / bound`.
    pub margin: f64,
    /// Fraenkel asymmetry, evaluated for the sharp form only.
    pub lambda: Option<f64>,
}

/// Evaluates the plain or sharp isoperimetric inequality for a mask.
pub fn check_isoperimetric(m: &Mask, form: IsoperimetricForm) -> IsoperimetricCheck {
    let area = m.area();
    let perimeter = mask_perimeter(m);
    let pe = p_e(area, 2);
    let inconclusive = |lambda| IsoperimetricCheck {
        form,
        status: IsoperimetricStatus::Inconclusive,
        perimeter,
        p_e: pe,
        bound: pe,
        margin: f64::NAN,
        lambda,
    };
    if m.count() == 0 || area > SMALL_SET_FRACTION * m.torus_area() {
        return inconclusive(None);
    }
    let (bound, lambda) = match form {
        IsoperimetricForm::Plain => (pe, None),
        IsoperimetricForm::Sharp => match fraenkel_asymmetry(m) {
            Ok(l) => (pe + SHARP_CONSTANT_2D * l * l * pe - 4.0 * 2.0 * area / m.ell(), Some(l)),
            Err(_) => return inconclusive(None),
        },
    };
    let margin = (perimeter - bound) / bound;
    let status = if margin >= -SLACK { IsoperimetricStatus::Holds } else { IsoperimetricStatus::Violated };
    IsoperimetricCheck { form, status, perimeter, p_e: pe, bound, margin, lambda }
}

/// The `k` equispaced levels spanning `[-1 + 2 kappa, 1 - 2 kappa]`.
pub fn defect_levels(kappa: f64, k: usize) -> Vec<f64> {
    let (a, b) = (-1.0 + 2.0 * kappa, 1.0 - 2.0 * kappa);
    (0..k).map(|i| if i + 1 == k { b } else { a + (b - a) * i as f64 / (k - 1) as f64 }).collect()
}

/// Weight `sqrt(2 G~(t))` of the defect integrand with
/// `G~ = (1 - 8 kappa) G`. The reduction factor is only meaningful while it
/// is positive (`phi < 1/512`); beyond that the plain `sqrt(2 G)` is used.
pub fn defect_weight(t: f64, kappa: f64) -> f64 {
    let factor = 1.0 - 8.0 * kappa;
    let factor = if factor > 0.0 { factor } else { 1.0 };
    (2.0 * factor * double_well(t)).sqrt()
}

/// Isoperimetric defect
/// `I(u) = int sqrt(2 G~(t)) (Per{u > t} - P_E{u > t}) dt`
/// over `t in [-1 + 2 kappa, 1 - 2 kappa]`, by the trapezoid rule on `k`
/// levels.
pub fn isoperimetric_defect(f: &Field, k: usize) -> Result<f64> {
    require_2d(f)?;
    if k < 3 {
        return Err(Error::domain(format!("isoperimetric defect needs at least 3 levels, got {k}")));
    }
    let kappa = f.params().kappa();
    let levels = defect_levels(kappa, k);
    let (n, h) = (f.n(), f.h());
    let values = f.values();
    let integrand: Vec<f64> = levels
        .par_iter()
        .map(|&t| {
            let count = values.iter().filter(|&&v| v > t).count();
            let area = count as f64 * h * h;
            let per = perimeter_of_values(values, n, h, t);
            defect_weight(t, kappa) * (per - p_e(area, 2))
        })
        .collect();
    let dt = (levels[k - 1] - levels[0]) / (k - 1) as f64;
    let interior: f64 = integrand[1..k - 1].iter().sum();
    Ok(dt * (0.5 * (integrand[0] + integrand[k - 1]) + interior))
}
