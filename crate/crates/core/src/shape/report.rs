//! Per-level shape summary of a two-dimensional field.

use std::fmt::Write as _;
use std::io::Write;

use super::{bonnesen_radii, defect_levels, fraenkel_asymmetry, isoperimetric_defect, p_e, perimeter, require_2d};
use super::{superlevel_mask, BonnesenRadii};
use crate::error::Result;
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub s: f64,
    pub area: f64,
    pub perimeter: f64,
    pub p_e: f64,
    /// `None` when the level set is empty or too large for an equal-area ball.
    pub fraenkel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub levels: Vec<LevelRecord>,
    pub defect: f64,
    /// Radii of `{u > 0}`, when that set is nonempty and fits the window.
    pub bonnesen: Option<BonnesenRadii>,
}

/// Records at `k` equispaced levels in `[-1 + 2 kappa, 1 - 2 kappa]`, the
/// isoperimetric defect on the same levels and the radii of `{u > 0}`.
pub fn shape_report(f: &Field, k: usize) -> Result<ShapeReport> {
    require_2d(f)?;
    let defect = isoperimetric_defect(f, k)?;
    let mut levels = Vec::with_capacity(k);
    for s in defect_levels(f.params().kappa(), k) {
        let m = superlevel_mask(f, s)?;
        let area = m.area();
        levels.push(LevelRecord {
            s,
            area,
            perimeter: perimeter(f, s)?,
            p_e: p_e(area, 2),
            fraenkel: fraenkel_asymmetry(&m).ok(),
        });
    }
    let bonnesen = bonnesen_radii(&superlevel_mask(f, 0.0)?).ok();
    Ok(ShapeReport { levels, defect, bonnesen })
}

impl ShapeReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,area,perimeter,p_e,fraenkel\n");
        for r in &self.levels {
            let fr = r.fraenkel.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.s, r.area, r.perimeter, r.p_e, fr);
        }
        let _ = writeln!(out, "# defect={}", self.defect);
        if let Some(b) = self.bonnesen {
            let _ = writeln!(out, "# rho_in={}", b.rho_in);
            let _ = writeln!(out, "# rho_out={}", b.rho_out);
            let _ = writeln!(out, "# rho={}", b.rho);
        }
        out
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}
