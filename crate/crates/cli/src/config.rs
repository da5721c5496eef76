//! Command-line flags, the optional JSON config file, and the resolved
//! [`RunConfig`] every command runs from.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use degchain_core::DEFAULT_FIT_RANGE;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the directory relative `--out` paths resolve against.
pub const OUT_DIR_ENV: &str = "DEGCHAIN_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "degchain",
    version,
    about = "Exact, evolved and simulated degree distributions of growing networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Steady distribution by recurrence and, when A > 0, closed form.
    Exact(Flags),
    /// Master-equation evolution with distance to the limit at decade times.
    Evolve(Flags),
    /// Seeded growth simulation and its empirical distribution.
    Simulate(Flags),
    /// Exact distribution against a simulation (or against itself).
    Compare(Flags),
    /// Exact and fitted tail exponents across a parameter grid.
    Sweep(Flags),
    /// Registered models and their parameter schemas.
    Models(Flags),
}

impl CommandArgs {
    pub fn split(self) -> (Command, Flags) {
        match self {
            CommandArgs::Exact(f) => (Command::Exact, f),
            CommandArgs::Evolve(f) => (Command::Evolve, f),
            CommandArgs::Simulate(f) => (Command::Simulate, f),
            CommandArgs::Compare(f) => (Command::Compare, f),
            CommandArgs::Sweep(f) => (Command::Sweep, f),
            CommandArgs::Models(f) => (Command::Models, f),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Attractiveness H (dms).
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub m0: Option<f64>,
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub k0: Option<f64>,
    /// Team size T (collab).
    #[arg(long)]
    pub team_size: Option<f64>,
    /// Admit H = 0 for dms.
    #[arg(long)]
    pub force: bool,
    /// Any model parameter as KEY=VALUE; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,

    #[arg(long)]
    pub k_max: Option<u64>,
    /// Network size for simulations.
    #[arg(long)]
    pub n: Option<u64>,
    /// Master-equation horizon.
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Log-log fit window as LO,HI.
    #[arg(long, value_name = "LO,HI", value_parser = parse_range)]
    pub fit_range: Option<(u64, u64)>,
    /// Lower cutoff of the tail MLE.
    #[arg(long)]
    pub k_min: Option<u64>,
    /// Sweep grid as PARAM=V1,V2,...
    #[arg(long, value_name = "PARAM=V1,V2,...")]
    pub grid: Option<String>,
    /// What `compare` sets against the exact distribution.
    #[arg(long, value_enum)]
    pub against: Option<Against>,
    /// `compare` exits with status 4 when tv exceeds this.
    #[arg(long)]
    pub max_tv: Option<f64>,
    /// `compare` exits with status 4 when |gamma_mle - gamma_exact| exceeds this.
    #[arg(long)]
    pub gamma_tol: Option<f64>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("{key}: {e}"))?;
    Ok((key.trim().to_string(), value))
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Exact,
    Evolve,
    Simulate,
    Compare,
    Sweep,
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Against {
    Simulation,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub param: String,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (param, values) = s
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("grid must be PARAM=V1,V2,..., got {s:?}")))?;
        let values = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("grid value {v:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Grid {
            param: param.trim().to_string(),
            values,
        })
    }
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub k_max: Option<u64>,
    pub n: Option<u64>,
    pub steps: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub fit_range: Option<(u64, u64)>,
    pub k_min: Option<u64>,
    pub grid: Option<Grid>,
    pub against: Option<Against>,
    pub max_tv: Option<f64>,
    pub gamma_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved configuration; echoed into every JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub model: String,
    /// Only the parameters that were set; the model fills its defaults.
    pub params: BTreeMap<String, f64>,
    pub k_max: u64,
    pub n: u64,
    pub steps: u64,
    pub seed: u64,
    pub trials: u64,
    pub fit_range: (u64, u64),
    pub k_min: u64,
    pub grid: Option<Grid>,
    pub against: Against,
    pub max_tv: Option<f64>,
    pub gamma_tol: Option<f64>,
    pub format: Format,
    /// Left out of the echo so identical runs written to different paths
    /// stay byte-identical.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `command` with nothing overridden.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            model: "ba".into(),
            params: BTreeMap::new(),
            k_max: match command {
                Command::Evolve => 500,
                _ => 10_000,
            },
            n: 100_000,
            steps: 10_000,
            seed: 42,
            trials: 1,
            fit_range: DEFAULT_FIT_RANGE,
            k_min: 10,
            grid: None,
            against: Against::Simulation,
            max_tv: None,
            gamma_tol: None,
            format: Format::Csv,
            out: None,
        }
    }

    /// Defaults, then the config file (if any), then flags.
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut cfg = RunConfig::new(command);
        cfg.apply_file(file);
        cfg.apply_flags(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, f: ConfigFile) {
        if let Some(v) = f.model {
            self.model = v;
        }
        self.params.extend(f.params);
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = f.$field {
                    self.$field = v;
                }
            )*};
        }
        take!(k_max, n, steps, seed, trials, fit_range, k_min, against, format);
        self.grid = f.grid.or(self.grid.take());
        self.max_tv = f.max_tv.or(self.max_tv);
        self.gamma_tol = f.gamma_tol.or(self.gamma_tol);
        self.out = f.out.or(self.out.take());
    }

    fn apply_flags(&mut self, f: Flags) -> Result<(), CliError> {
        if let Some(v) = f.model {
            self.model = v;
        }
        let named = [
            ("m", f.m),
            ("p", f.p),
            ("H", f.h),
            ("m0", f.m0),
            ("n0", f.n0),
            ("k0", f.k0),
            ("T", f.team_size),
        ];
        for (key, value) in named {
            if let Some(v) = value {
                self.params.insert(key.to_string(), v);
            }
        }
        if f.force {
            self.params.insert("force".into(), 1.0);
        }
        self.params.extend(f.params);
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = f.$field {
                    self.$field = v;
                }
            )*};
        }
        take!(k_max, n, steps, seed, trials, fit_range, k_min, against, format);
        if let Some(g) = f.grid {
            self.grid = Some(Grid::parse(&g)?);
        }
        self.max_tv = f.max_tv.or(self.max_tv);
        self.gamma_tol = f.gamma_tol.or(self.gamma_tol);
        self.out = f.out.or(self.out.take());
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        let (lo, hi) = self.fit_range;
        if lo == 0 || hi < 2 * lo {
            return Err(CliError::Usage(format!(
                "fit range {lo},{hi} needs LO >= 1 and HI >= 2 LO"
            )));
        }
        if self.command == Command::Sweep {
            match &self.grid {
                None => return Err(CliError::Usage("sweep needs --grid PARAM=V1,V2,...".into())),
                Some(g) if g.values.is_empty() => {
                    return Err(CliError::Usage(format!("empty grid for {}", g.param)))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Output path with relative paths placed under `$DEGCHAIN_OUT_DIR` when set.
    pub fn output_path(&self) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if out.is_relative() => Some(Path::new(&dir).join(out)),
            _ => Some(out.clone()),
        }
    }
}
