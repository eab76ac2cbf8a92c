//! Run configuration: command-line flags merged over an optional
//! `key=value` file.

use std::path::PathBuf;

use clap::Args;

use crate::error::CliError;

/// Flags shared by every subcommand. Each is optional so that a config
/// file can fill it in; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Spatial dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Scaling parameter xi.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Distance of the mean from -1.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Cells per axis (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output field file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output CSV report (stdout when absent).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// `key=value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Target volume.
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of superlevel sets.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Input field file.
    pub input: Option<PathBuf>,
}

/// Fully merged configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d: usize,
    pub xi: f64,
    pub phi: f64,
    pub n: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub omega: Option<f64>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub steps: Option<usize>,
    pub levels: Option<usize>,
    pub max_iter: Option<usize>,
    pub grad_tol: Option<f64>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
                parse_file(&text)?
            }
            None => Flags::default(),
        };
        Ok(Self {
            d: flags.d.or(file.d).unwrap_or(2),
            xi: flags.xi.or(file.xi).unwrap_or(1.5),
            phi: flags.phi.or(file.phi).unwrap_or(0.04),
            n: flags.n.or(file.n).unwrap_or(256),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.clone().or(file.out),
            report: flags.report.clone().or(file.report),
            omega: flags.omega.or(file.omega),
            omega_min: flags.omega_min.or(file.omega_min),
            omega_max: flags.omega_max.or(file.omega_max),
            steps: flags.steps.or(file.steps),
            levels: flags.levels.or(file.levels),
            max_iter: flags.max_iter.or(file.max_iter),
            grad_tol: flags.grad_tol.or(file.grad_tol),
            input: flags.input.clone().or(file.input),
        })
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Config(format!("invalid value {raw:?} for key {key:?}")))
}

/// Parses one `key=value` per line; blank lines and `#` comments are skipped.
/// Keys may use `-` or `_`.
pub fn parse_file(text: &str) -> Result<Flags, CliError> {
    let mut f = Flags::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, raw) =
            line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        let raw = raw.trim();
        match key.as_str() {
            "d" => f.d = Some(value(&key, raw)?),
            "xi" => f.xi = Some(value(&key, raw)?),
            "phi" => f.phi = Some(value(&key, raw)?),
            "n" => f.n = Some(value(&key, raw)?),
            "seed" => f.seed = Some(value(&key, raw)?),
            "out" => f.out = Some(PathBuf::from(raw)),
            "report" => f.report = Some(PathBuf::from(raw)),
            "omega" => f.omega = Some(value(&key, raw)?),
            "omega_min" => f.omega_min = Some(value(&key, raw)?),
            "omega_max" => f.omega_max = Some(value(&key, raw)?),
            "steps" => f.steps = Some(value(&key, raw)?),
            "levels" => f.levels = Some(value(&key, raw)?),
            "max_iter" => f.max_iter = Some(value(&key, raw)?),
            "grad_tol" => f.grad_tol = Some(value(&key, raw)?),
            "input" => f.input = Some(PathBuf::from(raw)),
            _ => return Err(CliError::Config(format!("line {}: unknown key {key:?}", lineno + 1))),
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = parse_file("# run\nphi = 0.08\nn=64\nmax-iter=10\n\n").unwrap();
        assert_eq!(file.phi, Some(0.08));
        assert_eq!(file.n, Some(64));
        assert_eq!(file.max_iter, Some(10));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "phi=0.08\nn=64\n").unwrap();
        let flags = Flags { n: Some(128), config: Some(path), ..Default::default() };
        let cfg = RunConfig::from_flags(&flags).unwrap();
        assert_eq!((cfg.d, cfg.xi, cfg.phi, cfg.n, cfg.seed), (2, 1.5, 0.08, 128, 0));
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(parse_file("phi"), Err(CliError::Config(_))));
        assert!(matches!(parse_file("colour=red"), Err(CliError::Config(_))));
        assert!(matches!(parse_file("n=abc"), Err(CliError::Config(_))));
    }
}
