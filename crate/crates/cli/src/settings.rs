use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Volume,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Lbfgs,
    Sd,
}

/// Flags shared by every subcommand. Any flag left out falls back to the
/// `--config` file, then to the built-in default.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunArgs {
    /// JSON file with any of these settings (keys as the flag names).
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Domain kind [default: volume]
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Half-space file (volume) or OBJ/OFF mesh (surface) [default: unit cube]
    #[arg(long, value_name = "PATH")]
    pub domain: Option<PathBuf>,

    /// Number of random initial generators [default: 100]
    #[arg(long, value_name = "N", conflicts_with = "seeds_file")]
    pub seeds: Option<usize>,

    /// Initial generators, one `x y z` per line
    #[arg(long, value_name = "PATH")]
    pub seeds_file: Option<PathBuf>,

    /// Even exponent of the Lp norm [default: 2]
    #[arg(long)]
    pub p: Option<u32>,

    /// `constant` for the identity tensor or a tensor field file [default: constant]
    #[arg(long, value_name = "constant|PATH")]
    pub aniso: Option<String>,

    /// Maximum optimizer iterations [default: 200]
    #[arg(long, value_name = "N")]
    pub iters: Option<usize>,

    /// Stop when the gradient's max-norm falls below this [default: 1e-8]
    #[arg(long, value_name = "X")]
    pub grad_tol: Option<f64>,

    /// Search direction [default: lbfgs]
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,

    /// Seed of the random generator [default: 0]
    #[arg(long, value_name = "N")]
    pub rng_seed: Option<u64>,

    /// Combine per-cell results in a fixed order [default: true]
    #[arg(long, value_name = "BOOL")]
    pub deterministic: Option<bool>,

    /// Output file prefix [default: lpcvt]
    #[arg(long, value_name = "PREFIX")]
    pub out: Option<PathBuf>,

    /// Also write the restricted Voronoi diagram as OBJ [default: false]
    #[arg(long, value_name = "BOOL")]
    pub export_rvd: Option<bool>,

    /// Perturb the initial generators by up to this fraction of the domain
    /// size, to break up degenerate configurations [default: 0]
    #[arg(long, value_name = "X")]
    pub jitter: Option<f64>,

    /// Finite-difference step for fd-check [default: 1e-6]
    #[arg(long, value_name = "H")]
    pub fd_step: Option<f64>,
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub mode: Mode,
    pub domain: Option<PathBuf>,
    pub seeds: usize,
    pub seeds_file: Option<PathBuf>,
    pub p: u32,
    pub aniso: String,
    pub iters: usize,
    pub grad_tol: f64,
    pub method: MethodArg,
    pub rng_seed: u64,
    pub deterministic: bool,
    pub out: PathBuf,
    pub export_rvd: bool,
    pub jitter: f64,
    pub fd_step: f64,
}

fn read_config(path: &Path) -> anyhow::Result<RunArgs> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl RunArgs {
    pub fn resolve(self) -> anyhow::Result<Settings> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => RunArgs::default(),
        };
        // A seed count on the command line overrides a seeds file in the
        // config, and the other way round.
        let (seeds, seeds_file) = if self.seeds.is_some() || self.seeds_file.is_some() {
            (self.seeds, self.seeds_file)
        } else {
            (file.seeds, file.seeds_file)
        };
        let s = Settings {
            mode: self.mode.or(file.mode).unwrap_or(Mode::Volume),
            domain: self.domain.or(file.domain),
            seeds: seeds.unwrap_or(100),
            seeds_file,
            p: self.p.or(file.p).unwrap_or(2),
            aniso: self.aniso.or(file.aniso).unwrap_or_else(|| "constant".into()),
            iters: self.iters.or(file.iters).unwrap_or(200),
            grad_tol: self.grad_tol.or(file.grad_tol).unwrap_or(1e-8),
            method: self.method.or(file.method).unwrap_or(MethodArg::Lbfgs),
            rng_seed: self.rng_seed.or(file.rng_seed).unwrap_or(0),
            deterministic: self.deterministic.or(file.deterministic).unwrap_or(true),
            out: self.out.or(file.out).unwrap_or_else(|| "lpcvt".into()),
            export_rvd: self.export_rvd.or(file.export_rvd).unwrap_or(false),
            jitter: self.jitter.or(file.jitter).unwrap_or(0.0),
            fd_step: self.fd_step.or(file.fd_step).unwrap_or(1e-6),
        };
        if s.mode == Mode::Surface && s.domain.is_none() {
            bail!("surface mode needs --domain");
        }
        if s.seeds_file.is_none() && s.seeds == 0 {
            bail!("--seeds must be at least 1");
        }
        if !(s.jitter >= 0.0) {
            bail!("--jitter must be non-negative");
        }
        if !(s.fd_step > 0.0) {
            bail!("--fd-step must be positive");
        }
        Ok(s)
    }
}
