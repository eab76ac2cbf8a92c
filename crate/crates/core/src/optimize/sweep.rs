use std::fmt::Write as _;

use rayon::prelude::*;

use super::{constrained_minimize, project_constraints_with, MinimizeConfig};
use crate::error::Result;
use crate::field::{volume_matched_droplet, Field, ModelParams, DEFAULT_CUTOFF};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Each sample starts from the previous minimiser (ascending volumes).
    Warm,
    /// Each sample starts from [`cold_start`].
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSample {
    pub omega: f64,
    pub energy: f64,
    pub converged: bool,
}

/// Energies of volume-constrained minimisers along a grid of volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierCurve {
    pub samples: Vec<BarrierSample>,
    /// Volume of the most energetic converged sample.
    pub omega_star: Option<f64>,
    /// Its energy, the weak energy barrier.
    pub delta_e_omega: Option<f64>,
}

impl BarrierCurve {
    pub fn from_samples(samples: Vec<BarrierSample>) -> Self {
        let best = samples.iter().filter(|s| s.converged).fold(None::<BarrierSample>, |acc, s| match acc {
            Some(a) if a.energy >= s.energy => Some(a),
            _ => Some(*s),
        });
        Self { omega_star: best.map(|s| s.omega), delta_e_omega: best.map(|s| s.energy), samples }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,energy,converged\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.omega, s.energy, s.converged);
        }
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "# omega_star={}", opt(self.omega_star));
        let _ = writeln!(out, "# delta_e_omega={}", opt(self.delta_e_omega));
        out
    }
}

/// Uniform state for `omega = 0`, otherwise the droplet with `nu = omega`.
pub fn cold_start(omega: f64, p: ModelParams, n: usize) -> Result<Field> {
    volume_matched_droplet(omega, p, n, DEFAULT_CUTOFF)
}

/// Runs [`constrained_minimize`] at every volume of `grid` (sorted
/// ascending). In warm mode a start that cannot be projected onto the next
/// volume is replaced by the cold start.
pub fn barrier_sweep(
    grid: &[f64],
    p: ModelParams,
    n: usize,
    cfg: &MinimizeConfig,
    mode: SweepMode,
) -> Result<BarrierCurve> {
    let mut omegas = grid.to_vec();
    omegas.sort_by(f64::total_cmp);
    let run = |omega: f64, init: &Field| -> Result<(BarrierSample, Field)> {
        let r = constrained_minimize(omega, init, cfg)?;
        Ok((BarrierSample { omega, energy: r.energy, converged: r.converged }, r.field))
    };
    let samples = match mode {
        SweepMode::Cold => {
            omegas.par_iter().map(|&w| run(w, &cold_start(w, p, n)?).map(|s| s.0)).collect::<Result<Vec<_>>>()?
        }
        SweepMode::Warm => {
            let mut out = Vec::with_capacity(omegas.len());
            let mut prev: Option<Field> = None;
            for &w in &omegas {
                let init = match prev.as_ref().map(|f| project_constraints_with(f, w, cfg.constraint_tol)) {
                    Some(Ok(f)) => f,
                    _ => cold_start(w, p, n)?,
                };
                let (s, f) = run(w, &init)?;
                out.push(s);
                prev = Some(f);
            }
            out
        }
    };
    Ok(BarrierCurve::from_samples(samples))
}

/// `k` equispaced volumes on `[lo, hi]`, ends included.
pub fn omega_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..k).map(|i| if i + 1 == k { hi } else { lo + (hi - lo) * i as f64 / (k - 1) as f64 }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_summary_and_csv() {
        let samples = vec![
            BarrierSample { omega: 0.0, energy: 0.0, converged: true },
            BarrierSample { omega: 0.2, energy: 0.9, converged: false },
            BarrierSample { omega: 0.3, energy: 0.7, converged: true },
        ];
        let c = BarrierCurve::from_samples(samples);
        assert_eq!(c.omega_star, Some(0.3));
        assert_eq!(c.delta_e_omega, Some(0.7));
        let csv = c.to_csv();
        assert!(csv.starts_with("omega,energy,converged\n0,0,true\n"));
        assert!(csv.contains("# omega_star=0.3\n# delta_e_omega=0.7\n"));
    }

    #[test]
    fn grid_ends() {
        let g = omega_grid(0.0, 0.97, 25);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[24], 0.97);
    }

    #[test]
    fn tiny_sweep_runs_in_both_modes() {
        let p = ModelParams::new(2, 1.5, 0.08).unwrap();
        let cfg = MinimizeConfig { max_iter: 20, ..Default::default() };
        let grid = [0.0, 0.5, 0.9];
        let warm = barrier_sweep(&grid, p, 64, &cfg, SweepMode::Warm).unwrap();
        let cold = barrier_sweep(&grid, p, 64, &cfg, SweepMode::Cold).unwrap();
        assert_eq!(warm.samples.len(), 3);
        assert_eq!(warm.samples[0], cold.samples[0]);
        assert!(warm.samples[0].converged);
    }
}
