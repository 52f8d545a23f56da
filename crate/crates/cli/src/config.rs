//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file. Keys in the file are the long flag names without the
//! leading dashes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twokaon::{BraidSpec, KaonParams, Sign};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "twokaon",
    version,
    about = "Two-kaon braid dynamics: verification, sweeps and tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the full invariant suite; exit 0 iff every check passes
    Verify,
    /// Bell quartet, braid-action images and the S/CP eigentable
    Bell,
    /// Evolve a two-kaon state under H(t) from t0 to t1
    Evolve,
    /// Concurrences and correlators over a grid of deformation phases
    SweepPhi,
    /// K -> K / K -> Kbar probabilities and asymmetry on [0, t1]
    Oscillate,
    /// Inversion relation R(t)R(1/t) against the closed form q^2 + q^-2 - t - 1/t
    RhoReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Bell => "bell",
            Command::Evolve => "evolve",
            Command::SweepPhi => "sweep-phi",
            Command::Oscillate => "oscillate",
            Command::RhoReport => "rho-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "format must be csv or json, got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Braid sign variant: plus or minus
    #[arg(long, global = true)]
    pub sign: Option<String>,
    /// Deformation phase phi in radians (q = e^{i phi})
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    /// End time (evolve) or t_max (oscillate)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Number of time samples
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Number of grid points for sweeps
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long = "gamma-s", global = true, allow_negative_numbers = true)]
    pub gamma_s: Option<f64>,
    #[arg(long = "gamma-l", global = true, allow_negative_numbers = true)]
    pub gamma_l: Option<f64>,
    /// Mass splitting m_L - m_S
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dm: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Replace every verification tolerance with this value
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Flat key = value configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Use the braid matrix with the stray (3,4) entry (diagnostic)
    #[arg(long = "uncorrected-b", global = true)]
    pub uncorrected_b: bool,
    /// Initial state for evolve: kk, kkbar, kbark, kbarkbar, phi1..phi4
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Explicit initial amplitudes "re0,im0,re1,im1,re2,im2,re3,im3"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub amps: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Label(String),
    Amplitudes([f64; 8]),
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub sign: Sign,
    pub phi: f64,
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
    pub grid: usize,
    pub params: KaonParams,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub uncorrected_b: bool,
    pub initial: InitialState,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let (t1, steps, grid) = match command {
            Command::Oscillate => (12.0, 500, 37),
            Command::SweepPhi => (1.0, 11, 37),
            Command::RhoReport => (1.0, 11, 9),
            _ => (1.0, 11, 9),
        };
        Self {
            command,
            sign: Sign::Plus,
            phi: 0.0,
            t0: 0.0,
            t1,
            steps,
            grid,
            params: KaonParams::default(),
            format: Format::Csv,
            out: None,
            tol: None,
            seed: DEFAULT_SEED,
            uncorrected_b: false,
            initial: InitialState::Label("kk".into()),
        }
    }

    /// Resolve `flags` over the file named by `--config` (if any) over defaults.
    pub fn resolve(command: Command, flags: &Flags) -> CliResult<Self> {
        let mut cfg = Self::defaults(command);
        if let Some(path) = &flags.config {
            for (key, value) in read_config_file(path)? {
                cfg.apply(&key, &value)?;
            }
        }
        cfg.apply_flags(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_flags(&mut self, f: &Flags) -> CliResult<()> {
        if let Some(s) = &f.sign {
            self.apply("sign", s)?;
        }
        if let Some(v) = f.phi {
            self.phi = v;
        }
        if let Some(v) = f.t0 {
            self.t0 = v;
        }
        if let Some(v) = f.t1 {
            self.t1 = v;
        }
        if let Some(v) = f.steps {
            self.steps = v;
        }
        if let Some(v) = f.grid {
            self.grid = v;
        }
        if let Some(v) = f.gamma_s {
            self.params.gamma_s = v;
        }
        if let Some(v) = f.gamma_l {
            self.params.gamma_l = v;
        }
        if let Some(v) = f.dm {
            self.params.m_s = 0.0;
            self.params.m_l = v;
        }
        if let Some(v) = f.format {
            self.format = v;
        }
        if let Some(v) = &f.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = f.seed {
            self.seed = v;
        }
        if let Some(v) = f.tol {
            self.tol = Some(v);
        }
        if f.uncorrected_b {
            self.uncorrected_b = true;
        }
        if let Some(v) = &f.state {
            self.apply("state", v)?;
        }
        if let Some(v) = &f.amps {
            self.apply("amps", v)?;
        }
        Ok(())
    }

    /// Set one key from its textual value.
    pub fn apply(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key {
            "sign" => {
                self.sign = value
                    .parse()
                    .map_err(|e: twokaon::Error| CliError::Config(e.to_string()))?
            }
            "phi" => self.phi = parse_num(key, value)?,
            "t0" => self.t0 = parse_num(key, value)?,
            "t1" => self.t1 = parse_num(key, value)?,
            "steps" => self.steps = parse_num(key, value)?,
            "grid" => self.grid = parse_num(key, value)?,
            "gamma-s" => self.params.gamma_s = parse_num(key, value)?,
            "gamma-l" => self.params.gamma_l = parse_num(key, value)?,
            "dm" => {
                self.params.m_s = 0.0;
                self.params.m_l = parse_num(key, value)?;
            }
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = parse_num(key, value)?,
            "tol" => self.tol = Some(parse_num(key, value)?),
            "uncorrected-b" => self.uncorrected_b = parse_num(key, value)?,
            "state" => {
                let label = value.to_ascii_lowercase();
                if !STATE_LABELS.contains(&label.as_str()) {
                    return Err(CliError::Config(format!(
                        "unknown state '{value}' (expected one of {})",
                        STATE_LABELS.join(", ")
                    )));
                }
                self.initial = InitialState::Label(label);
            }
            "amps" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|p| parse_num("amps", p))
                    .collect::<CliResult<_>>()?;
                let arr: [f64; 8] = parts.try_into().map_err(|v: Vec<f64>| {
                    CliError::Config(format!("amps needs 8 numbers, got {}", v.len()))
                })?;
                self.initial = InitialState::Amplitudes(arr);
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown configuration key '{other}'"
                )))
            }
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        for (name, v) in [("phi", self.phi), ("t0", self.t0), ("t1", self.t1)] {
            if !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if self.grid < 2 {
            return Err(CliError::Config(format!(
                "grid must be >= 2, got {}",
                self.grid
            )));
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Config(format!("tol must be > 0, got {tol}")));
            }
        }
        self.params
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    /// Braid spec for `sign`/`phi`, honouring `--uncorrected-b`.
    pub fn braid(&self, sign: Sign, phi: f64) -> twokaon::Result<BraidSpec> {
        let spec = BraidSpec::new(sign, phi)?;
        Ok(if self.uncorrected_b {
            spec.with_stray_entry()
        } else {
            spec
        })
    }

    pub fn spec(&self) -> twokaon::Result<BraidSpec> {
        self.braid(self.sign, self.phi)
    }

    /// Key/value echo of the configuration, in file syntax.
    pub fn echo(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("command", self.command.name().to_string());
        m.insert("sign", self.sign.to_string());
        m.insert("phi", crate::output::fmt_num(self.phi));
        m.insert("t0", crate::output::fmt_num(self.t0));
        m.insert("t1", crate::output::fmt_num(self.t1));
        m.insert("steps", self.steps.to_string());
        m.insert("grid", self.grid.to_string());
        m.insert("gamma-s", crate::output::fmt_num(self.params.gamma_s));
        m.insert("gamma-l", crate::output::fmt_num(self.params.gamma_l));
        m.insert("dm", crate::output::fmt_num(self.params.delta_m()));
        m.insert("format", self.format.to_string());
        m.insert("seed", self.seed.to_string());
        if let Some(tol) = self.tol {
            m.insert("tol", crate::output::fmt_num(tol));
        }
        m.insert("uncorrected-b", self.uncorrected_b.to_string());
        match &self.initial {
            InitialState::Label(l) => {
                m.insert("state", l.clone());
            }
            InitialState::Amplitudes(a) => {
                let s: Vec<String> = a.iter().map(|v| crate::output::fmt_num(*v)).collect();
                m.insert("amps", s.join(","));
            }
        }
        m
    }
}

pub const STATE_LABELS: [&str; 8] = [
    "kk", "kkbar", "kbark", "kbarkbar", "phi1", "phi2", "phi3", "phi4",
];

fn parse_num<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value '{value}' for {key}")))
}

pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn read_config_file(path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_are_overridden_by_flags() {
        let mut cfg = RunConfig::defaults(Command::Evolve);
        for (k, v) in parse_config_text("# comment\nphi = 1.5\nsign = minus\nsteps=20\n").unwrap() {
            cfg.apply(&k, &v).unwrap();
        }
        let flags = Flags {
            phi: Some(0.25),
            ..Flags::default()
        };
        cfg.apply_flags(&flags).unwrap();
        assert_eq!(cfg.phi, 0.25);
        assert_eq!(cfg.sign, Sign::Minus);
        assert_eq!(cfg.steps, 20);
    }

    #[test]
    fn rejects_bad_keys_and_values() {
        let mut cfg = RunConfig::defaults(Command::Verify);
        assert!(cfg.apply("colour", "red").is_err());
        assert!(cfg.apply("steps", "many").is_err());
        assert!(cfg.apply("amps", "1,0,0").is_err());
        assert!(cfg.apply("state", "kaon").is_err());
        assert!(parse_config_text("novalue\n").is_err());
        cfg.grid = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn amps_parse() {
        let mut cfg = RunConfig::defaults(Command::Evolve);
        cfg.apply("amps", "1,0, 0,0,0,0,0,0").unwrap();
        assert_eq!(
            cfg.initial,
            InitialState::Amplitudes([1., 0., 0., 0., 0., 0., 0., 0.])
        );
    }
}
