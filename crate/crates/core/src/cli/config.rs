//! Run configuration: `key=value` files merged under command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::reservoir::{Q2Model, ReservoirConfig};
use crate::state::{QubitPairConfig, XStateParams};

/// Keys accepted in a configuration file.
pub const KNOWN_KEYS: &[&str] = &[
    "c1",
    "c2",
    "c3",
    "omega_a",
    "omega_b",
    "omega",
    "r",
    "detunings",
    "eta",
    "omega_c",
    "temperature",
    "t_min",
    "t_max",
    "points",
    "spacing",
    "large_detuning_limit",
    "q2",
    "output",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Spacing as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Q2Choice {
    /// Quadrature at T > 0, closed form at T = 0.
    Exact,
    /// Low-temperature closed form.
    LowTemperature,
}

impl FromStr for Q2Choice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Q2Choice as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Identical qubits, c = (0.6, 0, 0.3).
    Fig3,
    /// c = (0.6, 0, 0.3) at r = 1, 1.5, 2, 5.
    Fig6,
}

/// Model and grid flags shared by all subcommands. Every value can also be
/// given in the `--config` file; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// key=value configuration file
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// state parameter c1 [default: 0.6]
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    /// state parameter c2 [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    /// state parameter c3 [default: 0.3]
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    /// frequency of qubit A (use with --omega-b)
    #[arg(long)]
    pub omega_a: Option<f64>,
    /// frequency of qubit B (use with --omega-a)
    #[arg(long)]
    pub omega_b: Option<f64>,
    /// frequency Ω of qubit B when giving a detuning [default: 1]
    #[arg(long)]
    pub omega: Option<f64>,
    /// detuning r = omega_A/omega_B [default: 1]
    #[arg(long)]
    pub r: Option<f64>,
    /// comma-separated detunings, one series each (evolve only)
    #[arg(long, value_delimiter = ',')]
    pub detunings: Option<Vec<f64>>,
    /// coupling strength eta [default: 1]
    #[arg(long)]
    pub eta: Option<f64>,
    /// bath cutoff frequency omega_c [default: 1]
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// bath temperature, 0 for the zero-temperature limit [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// first grid time in units of 1/omega_c [default: 0]
    #[arg(long)]
    pub t_min: Option<f64>,
    /// last grid time in units of 1/omega_c [default: 10]
    #[arg(long)]
    pub t_max: Option<f64>,
    /// number of grid points [default: 400]
    #[arg(long)]
    pub points: Option<usize>,
    /// grid spacing [default: linear]
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// exact r -> infinity limit at fixed omega_A (gamma2 = gamma1)
    #[arg(long)]
    pub large_detuning_limit: bool,
    /// Q2 evaluation at finite temperature [default: exact]
    #[arg(long, value_enum)]
    pub q2: Option<Q2Choice>,
    /// parameter preset applied beneath file and flags
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// write CSV here instead of stdout
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

/// Qubit frequencies as requested, before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum QubitSpec {
    Pair { omega_a: f64, omega_b: f64 },
    Detuned { omega_b: f64, detunings: Vec<f64> },
    LargeDetuningLimit { omega_a: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl TimeGrid {
    /// Grid values of `ω_c t`.
    pub fn scaled_times(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.t_min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let s = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.t_min + (self.t_max - self.t_min) * s,
                    Spacing::Log => (self.t_min.ln() + (self.t_max.ln() - self.t_min.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: XStateParams,
    pub qubits: QubitSpec,
    pub reservoir: ReservoirConfig,
    pub grid: TimeGrid,
    pub output: Option<PathBuf>,
    /// Keys that were set explicitly by a flag or the file.
    pub explicit: Vec<&'static str>,
}

impl RunConfig {
    /// One qubit pair per requested detuning (a single pair otherwise).
    pub fn qubit_pairs(&self) -> Vec<QubitPairConfig> {
        match &self.qubits {
            QubitSpec::Pair { omega_a, omega_b } => vec![QubitPairConfig::new(*omega_a, *omega_b).expect("validated")],
            QubitSpec::Detuned { omega_b, detunings } => detunings
                .iter()
                .map(|&r| QubitPairConfig::with_detuning(r, *omega_b).expect("validated"))
                .collect(),
            QubitSpec::LargeDetuningLimit { omega_a } => {
                vec![QubitPairConfig::large_detuning_limit(*omega_a).expect("validated")]
            }
        }
    }

    pub fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(&key)
    }

    /// `# key=value` lines recording every resolved setting.
    pub fn stamp(&self, command: &str) -> String {
        let mut lines = vec![format!("# discord-dynamics {command}")];
        let p = &self.params;
        lines.push(format!("# c1={}", p.c1()));
        lines.push(format!("# c2={}", p.c2()));
        lines.push(format!("# c3={}", p.c3()));
        match &self.qubits {
            QubitSpec::Pair { omega_a, omega_b } => {
                lines.push(format!("# omega_a={omega_a}"));
                lines.push(format!("# omega_b={omega_b}"));
            }
            QubitSpec::Detuned { omega_b, detunings } => {
                lines.push(format!("# omega={omega_b}"));
                let list: Vec<String> = detunings.iter().map(f64::to_string).collect();
                lines.push(format!("# detunings={}", list.join(",")));
            }
            QubitSpec::LargeDetuningLimit { omega_a } => {
                lines.push(format!("# omega_a={omega_a}"));
                lines.push("# large_detuning_limit=true".to_string());
            }
        }
        let res = &self.reservoir;
        lines.push(format!("# eta={}", res.eta()));
        lines.push(format!("# omega_c={}", res.omega_c()));
        lines.push(format!("# temperature={}", res.temperature()));
        let q2 = match res.q2_model() {
            Q2Model::Exact => "exact",
            Q2Model::LowTemperature => "low-temperature",
        };
        lines.push(format!("# q2={q2}"));
        let g = &self.grid;
        lines.push(format!("# t_min={}", g.t_min));
        lines.push(format!("# t_max={}", g.t_max));
        lines.push(format!("# points={}", g.points));
        let spacing = match g.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        lines.push(format!("# spacing={spacing}"));
        lines.join("\n") + "\n"
    }
}

/// Reads a `key=value` file. Blank lines and `#` comments are ignored;
/// unknown or repeated keys are errors carrying the line number.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

pub fn parse_config_text(text: &str, origin: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "{origin}:{line_no}: expected key=value, got `{line}`"
            )));
        };
        let key = key.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError(format!("{origin}:{line_no}: unknown key `{key}`")));
        }
        if let Some((first, _)) = entries.get(&key) {
            return Err(ConfigError(format!(
                "{origin}:{line_no}: `{key}` already set on line {first}"
            )));
        }
        entries.insert(key, (line_no, value.trim().to_string()));
    }
    Ok(entries)
}

struct Layers<'a> {
    file: &'a BTreeMap<String, (usize, String)>,
    origin: String,
    explicit: Vec<&'static str>,
}

impl Layers<'_> {
    /// Flag value if given, else the file value, else `None`.
    fn get<T: FromStr>(&mut self, key: &'static str, flag: Option<T>) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            self.explicit.push(key);
            return Ok(flag);
        }
        match self.file.get(key) {
            Some((line, raw)) => {
                self.explicit.push(key);
                raw.parse::<T>().map(Some).map_err(|e| {
                    ConfigError(format!(
                        "{}:{line}: invalid value `{raw}` for `{key}`: {e}",
                        self.origin
                    ))
                })
            }
            None => Ok(None),
        }
    }

    fn get_list(&mut self, key: &'static str, flag: Option<Vec<f64>>) -> Result<Option<Vec<f64>>, ConfigError> {
        if flag.is_some() {
            self.explicit.push(key);
            return Ok(flag);
        }
        match self.file.get(key) {
            Some((line, raw)) => {
                self.explicit.push(key);
                raw.split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some)
                    .map_err(|e| ConfigError(format!("{}:{line}: invalid list `{raw}` for `{key}`: {e}", self.origin)))
            }
            None => Ok(None),
        }
    }
}

fn field(name: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError(format!("field `{name}`: {msg}"))
}

/// Resolves flags, an optional file, an optional preset and defaults into a validated config.
pub fn parse_config(args: &ModelArgs) -> Result<RunConfig, ConfigError> {
    let empty = BTreeMap::new();
    let loaded;
    let (file, origin) = match &args.config {
        Some(path) => {
            loaded = read_config_file(path)?;
            (&loaded, path.display().to_string())
        }
        None => (&empty, String::from("<none>")),
    };
    let mut layers = Layers {
        file,
        origin,
        explicit: Vec::new(),
    };

    let preset_detunings = match args.preset {
        Some(Preset::Fig6) => Some(vec![1.0, 1.5, 2.0, 5.0]),
        _ => None,
    };

    let c1 = layers.get("c1", args.c1)?.unwrap_or(0.6);
    let c2 = layers.get("c2", args.c2)?.unwrap_or(0.0);
    let c3 = layers.get("c3", args.c3)?.unwrap_or(0.3);
    let params = XStateParams::new(c1, c2, c3).map_err(|e| field("c1/c2/c3", e))?;

    let omega_a = layers.get("omega_a", args.omega_a)?;
    let omega_b = layers.get("omega_b", args.omega_b)?;
    let omega = layers.get("omega", args.omega)?;
    let r = layers.get("r", args.r)?;
    let detunings = layers.get_list("detunings", args.detunings.clone())?;
    let limit_flag = if args.large_detuning_limit { Some(true) } else { None };
    let limit = layers.get("large_detuning_limit", limit_flag)?.unwrap_or(false);

    let pair_given = omega_a.is_some() || omega_b.is_some();
    let detuned_given = omega.is_some() || r.is_some() || detunings.is_some();
    if pair_given && detuned_given {
        return Err(ConfigError(
            "contradictory qubit settings: use either omega_a/omega_b or omega/r/detunings".into(),
        ));
    }
    if r.is_some() && detunings.is_some() {
        return Err(ConfigError(
            "contradictory qubit settings: both r and detunings given".into(),
        ));
    }
    let qubits = if limit {
        if omega_b.is_some() || r.is_some() || detunings.is_some() {
            return Err(ConfigError(
                "large_detuning_limit fixes omega_B -> 0; omega_b, r and detunings are not allowed".into(),
            ));
        }
        let omega_a = omega_a.or(omega).unwrap_or(1.0);
        QubitPairConfig::large_detuning_limit(omega_a).map_err(|e| field("omega_a", e))?;
        QubitSpec::LargeDetuningLimit { omega_a }
    } else if pair_given {
        let (a, b) = (omega_a.unwrap_or(1.0), omega_b.unwrap_or(1.0));
        QubitPairConfig::new(a, b).map_err(|e| field("omega_a/omega_b", e))?;
        QubitSpec::Pair { omega_a: a, omega_b: b }
    } else {
        let omega_b = omega.unwrap_or(1.0);
        let detunings = match (detunings, r) {
            (Some(list), _) => list,
            (None, Some(r)) => vec![r],
            (None, None) => preset_detunings.unwrap_or_else(|| vec![1.0]),
        };
        if detunings.is_empty() {
            return Err(field("detunings", "empty list"));
        }
        for &r in &detunings {
            QubitPairConfig::with_detuning(r, omega_b).map_err(|e| field("r", e))?;
        }
        QubitSpec::Detuned { omega_b, detunings }
    };

    let eta = layers.get("eta", args.eta)?.unwrap_or(1.0);
    let omega_c = layers.get("omega_c", args.omega_c)?.unwrap_or(1.0);
    let temperature = layers.get("temperature", args.temperature)?.unwrap_or(0.0);
    let q2 = layers.get("q2", args.q2)?.unwrap_or(Q2Choice::Exact);
    let model = match q2 {
        Q2Choice::Exact => Q2Model::Exact,
        Q2Choice::LowTemperature => Q2Model::LowTemperature,
    };
    let reservoir = ReservoirConfig::new(eta, omega_c, temperature)
        .map_err(|e| field("eta/omega_c/temperature", e))?
        .with_q2_model(model);

    let t_min = layers.get("t_min", args.t_min)?.unwrap_or(0.0);
    let t_max = layers.get("t_max", args.t_max)?.unwrap_or(10.0);
    let points = layers.get("points", args.points)?.unwrap_or(400);
    let spacing = layers.get("spacing", args.spacing)?.unwrap_or(Spacing::Linear);
    if !(t_min >= 0.0 && t_min.is_finite()) {
        return Err(field("t_min", format!("must be finite and >= 0, got {t_min}")));
    }
    if !(t_max >= t_min && t_max.is_finite()) {
        return Err(field("t_max", format!("must be finite and >= t_min, got {t_max}")));
    }
    if points == 0 {
        return Err(field("points", "must be at least 1"));
    }
    if spacing == Spacing::Log && t_min <= 0.0 {
        return Err(field("t_min", "log spacing needs t_min > 0"));
    }
    let output = layers.get::<PathBuf>("output", args.output.clone())?;

    Ok(RunConfig {
        params,
        qubits,
        reservoir,
        grid: TimeGrid {
            t_min,
            t_max,
            points,
            spacing,
        },
        output,
        explicit: layers.explicit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = parse_config(&ModelArgs::default()).unwrap();
        assert_eq!(cfg.params, XStateParams::new(0.6, 0.0, 0.3).unwrap());
        assert_eq!(
            cfg.qubits,
            QubitSpec::Detuned {
                omega_b: 1.0,
                detunings: vec![1.0]
            }
        );
        assert_eq!(cfg.reservoir, ReservoirConfig::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            cfg.grid,
            TimeGrid {
                t_min: 0.0,
                t_max: 10.0,
                points: 400,
                spacing: Spacing::Linear
            }
        );
        assert!(cfg.explicit.is_empty());
    }

    #[test]
    fn rejects_unphysical_state() {
        let args = ModelArgs {
            c1: Some(2.0),
            ..Default::default()
        };
        let err = parse_config(&args).unwrap_err();
        assert!(err.0.contains("c1"), "{err}");
        let args = ModelArgs {
            c1: Some(1.0),
            c2: Some(1.0),
            c3: Some(1.0),
            ..Default::default()
        };
        assert!(parse_config(&args).unwrap_err().0.contains("positivity"));
    }

    #[test]
    fn rejects_negative_temperature() {
        let args = ModelArgs {
            temperature: Some(-1.0),
            ..Default::default()
        };
        assert!(parse_config(&args).unwrap_err().0.contains("temperature"));
    }

    #[test]
    fn contradictory_flags() {
        let args = ModelArgs {
            omega_a: Some(2.0),
            r: Some(2.0),
            ..Default::default()
        };
        assert!(parse_config(&args).unwrap_err().0.contains("contradictory"));
        let args = ModelArgs {
            large_detuning_limit: true,
            omega_b: Some(1.0),
            ..Default::default()
        };
        assert!(parse_config(&args).is_err());
    }

    #[test]
    fn file_parsing_errors_carry_lines() {
        let err = parse_config_text("c1 = 0.5\n\nbogus=3\n", "cfg").unwrap_err();
        assert_eq!(err.0, "cfg:3: unknown key `bogus`");
        let err = parse_config_text("c1=0.5\nc1=0.4", "cfg").unwrap_err();
        assert!(err.0.contains("line 1"));
        let err = parse_config_text("just words", "cfg").unwrap_err();
        assert!(err.0.starts_with("cfg:1:"));
        let ok = parse_config_text("# comment\nomega-c = 2 # trailing\n", "cfg").unwrap();
        assert_eq!(ok["omega_c"], (2, "2".to_string()));
    }

    #[test]
    fn grids() {
        let lin = TimeGrid {
            t_min: 0.0,
            t_max: 10.0,
            points: 5,
            spacing: Spacing::Linear,
        };
        assert_eq!(lin.scaled_times(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let log = TimeGrid {
            t_min: 0.1,
            t_max: 10.0,
            points: 3,
            spacing: Spacing::Log,
        };
        let v = log.scaled_times();
        assert!((v[1] - 1.0).abs() < 1e-15 && (v[2] - 10.0).abs() < 1e-13);
    }
}
