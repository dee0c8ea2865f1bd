use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Run configuration. Every key is optional in the file; flags override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand this file is meant for; must match the one invoked.
    pub command: Option<String>,
    pub potential: Option<String>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub l: Option<f64>,
    pub p: Option<f64>,
    pub p_list: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub tau: Option<f64>,
    pub t_end: Option<f64>,
    pub window: Option<[f64; 2]>,
    pub rtol: Option<f64>,
    pub tol: Option<f64>,
    pub m: Option<usize>,
    pub line: Option<[f64; 4]>,
    pub snapshot_every: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with any of the keys below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Catalog id: power, linear, sine, quartic, constant (1D); vortex, two-vortex, constant2d, separable (2D)
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Power-law exponent
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Constant drift strength
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Half-width of the interval / square
    #[arg(long, global = true)]
    pub l: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Comma-separated list of p values
    #[arg(long, global = true, value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,
    /// Interior nodes (1D)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub nx: Option<usize>,
    #[arg(long, global = true)]
    pub ny: Option<usize>,
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true)]
    pub t_end: Option<f64>,
    /// Decay-fit window `t0,t1`
    #[arg(long, global = true, value_delimiter = ',', num_args = 2)]
    pub window: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Well detection tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Number of eigenpairs (eig1d)
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Extra profile section `x1,y1,x2,y2` (evolve2d)
    #[arg(long, global = true, value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
    pub line: Option<Vec<f64>>,
    /// Write a profile snapshot every k steps (evolve2d)
    #[arg(long, global = true)]
    pub snapshot_every: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

pub fn load_file(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

/// File values overlaid by flags, checked against the invoked command.
pub fn resolve(flags: &Flags, command: &str) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => load_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(cmd) = &cfg.command {
        if cmd != command {
            return Err(CliError::Config(format!("config is for `{cmd}`, invoked `{command}`")));
        }
    }
    cfg.command = Some(command.to_string());
    macro_rules! take {
        ($($f:ident),*) => {$(if flags.$f.is_some() { cfg.$f = flags.$f.clone(); })*};
    }
    take!(potential, alpha, c, l, p, p_list, n, nx, ny, tau, t_end, rtol, tol, m, snapshot_every, out, seed);
    if let Some(w) = &flags.window {
        cfg.window = Some([w[0], w[1]]);
    }
    if let Some(v) = &flags.line {
        cfg.line = Some([v[0], v[1], v[2], v[3]]);
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let positive = |name: &str, v: Option<f64>| match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Config(format!("{name} must be positive, got {x}"))),
        _ => Ok(()),
    };
    positive("l", cfg.l)?;
    positive("tau", cfg.tau)?;
    positive("t_end", cfg.t_end)?;
    positive("rtol", cfg.rtol)?;
    positive("tol", cfg.tol)?;
    for p in cfg.p.iter().chain(cfg.p_list.iter().flatten()) {
        if !(p.is_finite() && *p >= 0.0) {
            return Err(CliError::Config(format!("p must be finite and nonnegative, got {p}")));
        }
    }
    for (name, v) in [("n", cfg.n), ("nx", cfg.nx), ("ny", cfg.ny), ("m", cfg.m)] {
        if v == Some(0) {
            return Err(CliError::Config(format!("{name} must be at least 1")));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn require_p(&self) -> Result<f64, CliError> {
        self.p.ok_or_else(|| CliError::Config("missing p (use --p or `p = ...`)".into()))
    }

    /// `p_list` if given, else `[p]`.
    pub fn ps(&self) -> Result<Vec<f64>, CliError> {
        match (&self.p_list, self.p) {
            (Some(v), _) if !v.is_empty() => Ok(v.clone()),
            (_, Some(p)) => Ok(vec![p]),
            _ => Err(CliError::Config("missing p or p_list".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let err = toml::from_str::<RunConfig>("p = 3.0\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "command = \"eig1d\"\np = 3.0\nn = 101\n").unwrap();
        let flags = Flags { config: Some(path), p: Some(7.0), ..Default::default() };
        let cfg = resolve(&flags, "eig1d").unwrap();
        assert_eq!(cfg.p, Some(7.0));
        assert_eq!(cfg.n, Some(101));
        assert!(matches!(resolve(&flags, "sweep"), Err(CliError::Config(_))));
    }

    #[test]
    fn bad_values_rejected() {
        let flags = Flags { tau: Some(-1.0), ..Default::default() };
        assert!(resolve(&flags, "evolve2d").is_err());
        let flags = Flags { p_list: Some(vec![1.0, f64::NAN]), ..Default::default() };
        assert!(resolve(&flags, "sweep").is_err());
    }
}
