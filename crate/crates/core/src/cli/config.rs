//! Flat `key=value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Keys starting with
//! `manifest.` are metadata written by a previous run and are skipped, so a run
//! manifest can be fed back in as a config file.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::{ErrorMetric, ExperimentConfig, Noise};
use crate::model::{ModelParams, Regime};
use crate::projection::default_exponent;
use crate::schemes::SchemeKind;

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line { file: String, line: usize },
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line { file, line } => write!(f, "{file}:{line}"),
            Origin::Flag(name) => write!(f, "flag {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    key: String,
    value: String,
    origin: Origin,
}

/// Settings in application order; later entries override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigEntries {
    entries: Vec<Entry>,
}

pub const MODEL_KEYS: [&str; 8] = ["alpha_m1", "alpha_0", "alpha_1", "alpha_2", "sigma", "r", "rho", "x0"];

const OTHER_KEYS: [&str; 12] = [
    "preset", "t_end", "q", "levels", "ref_level", "ref_scheme", "schemes", "paths", "seed", "threads", "metric",
    "noise",
];

impl ConfigEntries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_text(&text, &path.display().to_string())
    }

    pub fn parse_text(text: &str, file: &str) -> Result<Self> {
        let mut out = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let origin = Origin::Line {
                file: file.to_string(),
                line: i + 1,
            };
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("{origin}: expected key=value, got `{line}`")));
            };
            let key = key.trim();
            if key.starts_with("manifest.") {
                continue;
            }
            out.push(key, value.trim(), origin)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, key: &str, value: &str, origin: Origin) -> Result<()> {
        let key = match key {
            "T" => "t_end",
            "M" | "num_paths" => "paths",
            "scheme" => "schemes",
            k => k,
        };
        if !MODEL_KEYS.contains(&key) && !OTHER_KEYS.contains(&key) {
            return Err(Error::Config(format!("{origin}: unknown key `{key}`")));
        }
        self.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            origin,
        });
        Ok(())
    }

    pub fn flag(&mut self, key: &str, value: impl ToString, flag: &str) -> Result<()> {
        self.push(key, &value.to_string(), Origin::Flag(flag.to_string()))
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().rev().find(|e| e.key == key)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|e| {
                e.value
                    .parse::<T>()
                    .map_err(|err| Error::Config(format!("{}: invalid value `{}` for {key}: {err}", e.origin, e.value)))
            })
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|e| {
                e.value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<T>()
                            .map_err(|err| Error::Config(format!("{}: invalid item `{s}` in {key}: {err}", e.origin)))
                    })
                    .collect()
            })
            .transpose()
    }

    /// Comma list of levels where an item may be an inclusive range `a-b`.
    fn levels(&self, key: &str) -> Result<Option<Vec<u32>>> {
        let Some(e) = self.get(key) else {
            return Ok(None);
        };
        let bad = |s: &str| Error::Config(format!("{}: invalid item `{s}` in {key}", e.origin));
        let mut out = Vec::new();
        for item in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('-') {
                Some((a, b)) => {
                    let a: u32 = a.trim().parse().map_err(|_| bad(item))?;
                    let b: u32 = b.trim().parse().map_err(|_| bad(item))?;
                    if a > b {
                        return Err(bad(item));
                    }
                    out.extend(a..=b);
                }
                None => out.push(item.parse().map_err(|_| bad(item))?),
            }
        }
        Ok(Some(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Example1,
    Example2,
    Example3,
}

impl Preset {
    pub fn params(self) -> ModelParams {
        match self {
            Preset::Example1 => ModelParams::example1(),
            Preset::Example2 => ModelParams::example2(),
            Preset::Example3 => ModelParams::example3(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Example1 => "example1",
            Preset::Example2 => "example2",
            Preset::Example3 => "example3",
        }
    }

    pub const ALL: [Preset; 3] = [Preset::Example1, Preset::Example2, Preset::Example3];
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}` (expected example1, example2 or example3)")))
    }
}

fn parse_metric(s: &str) -> Result<ErrorMetric> {
    match s {
        "terminal" => Ok(ErrorMetric::Terminal),
        "max" | "max_over_grid" => Ok(ErrorMetric::MaxOverGrid),
        other => Err(Error::Config(format!("unknown metric `{other}` (expected terminal or max)"))),
    }
}

pub fn metric_name(m: ErrorMetric) -> &'static str {
    match m {
        ErrorMetric::Terminal => "terminal",
        ErrorMetric::MaxOverGrid => "max",
    }
}

pub fn noise_name(n: Noise) -> &'static str {
    match n {
        Noise::Brownian => "brownian",
        Noise::Zero => "zero",
    }
}

/// A validated experiment plus what the caller should report.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub experiment: ExperimentConfig,
    pub preset: Option<Preset>,
    pub regime: Regime,
    /// True when no seed was supplied and one was drawn at random.
    pub random_seed: bool,
    pub warnings: Vec<String>,
}

/// Resolves entries into a validated experiment.
///
/// Model coefficients come from `preset` when given, individual keys override
/// them; without a preset every coefficient is required.
pub fn parse_config(entries: &ConfigEntries) -> Result<ParsedConfig> {
    let preset: Option<Preset> = match entries.get("preset") {
        Some(e) => Some(
            e.value
                .parse()
                .map_err(|err: Error| Error::Config(format!("{}: {}", e.origin, err.root_cause())))?,
        ),
        None => None,
    };
    let base = preset.map(Preset::params);
    let mut coeffs = [0.0; 8];
    for (slot, key) in coeffs.iter_mut().zip(MODEL_KEYS) {
        *slot = match (entries.parsed::<f64>(key)?, base) {
            (Some(v), _) => v,
            (None, Some(b)) => model_field(&b, key),
            (None, None) => {
                return Err(Error::Config(format!("missing required key `{key}` (no preset given)")));
            }
        };
    }
    let [alpha_m1, alpha_0, alpha_1, alpha_2, sigma, r, rho, x0] = coeffs;
    let params = ModelParams {
        alpha_m1,
        alpha_0,
        alpha_1,
        alpha_2,
        sigma,
        r,
        rho,
        x0,
    }
    .validate()?;

    let mut warnings = Vec::new();
    let regime = params.classify_regime();
    match regime {
        Regime::Inadmissible => {
            return Err(Error::Config(format!(
                "parameter set is inadmissible: critical case with alpha_2/sigma^2 = {} <= {}",
                params.alpha_2 / params.sigma.powi(2),
                params.monotonicity_threshold()
            )));
        }
        Regime::CriticalHalfOnly => warnings.push(format!(
            "critical case with alpha_2/sigma^2 = {} < 4r + 1/2 = {}: order-one convergence is not guaranteed",
            params.alpha_2 / params.sigma.powi(2),
            params.order_one_threshold()
        )),
        _ => {}
    }

    let defaults = ExperimentConfig::reference_protocol(params);
    let (seed, random_seed) = match entries.parsed::<u64>("seed")? {
        Some(s) => (s, false),
        None => (rand::random::<u64>(), true),
    };
    let experiment = ExperimentConfig {
        params,
        q: entries.parsed("q")?.unwrap_or(default_exponent(params.r)),
        t_end: entries.parsed("t_end")?.unwrap_or(defaults.t_end),
        levels: entries.levels("levels")?.unwrap_or(defaults.levels),
        ref_level: entries.parsed("ref_level")?.unwrap_or(defaults.ref_level),
        ref_scheme: entries.parsed("ref_scheme")?.unwrap_or(defaults.ref_scheme),
        schemes: entries.list("schemes")?.unwrap_or(defaults.schemes),
        num_paths: entries.parsed("paths")?.unwrap_or(defaults.num_paths),
        seed,
        threads: entries.parsed("threads")?.unwrap_or(0),
        metric: entries
            .get("metric")
            .map(|e| parse_metric(&e.value))
            .transpose()?
            .unwrap_or_default(),
        noise: match entries.get("noise").map(|e| e.value.as_str()) {
            None | Some("brownian") => Noise::Brownian,
            Some("zero") => Noise::Zero,
            Some(other) => return Err(Error::Config(format!("unknown noise `{other}`"))),
        },
    };
    experiment.validate()?;
    Ok(ParsedConfig {
        experiment,
        preset,
        regime,
        random_seed,
        warnings,
    })
}

fn model_field(p: &ModelParams, key: &str) -> f64 {
    match key {
        "alpha_m1" => p.alpha_m1,
        "alpha_0" => p.alpha_0,
        "alpha_1" => p.alpha_1,
        "alpha_2" => p.alpha_2,
        "sigma" => p.sigma,
        "r" => p.r,
        "rho" => p.rho,
        "x0" => p.x0,
        _ => unreachable!("not a model key: {key}"),
    }
}

/// `key=value` lines that [`parse_config`] turns back into `cfg`.
pub fn config_lines(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let p = &cfg.params;
    let join = |v: Vec<String>| v.join(",");
    let mut out: Vec<(String, String)> = MODEL_KEYS
        .iter()
        .map(|k| (k.to_string(), model_field(p, k).to_string()))
        .collect();
    out.extend([
        ("t_end".into(), cfg.t_end.to_string()),
        ("q".into(), cfg.q.to_string()),
        ("levels".into(), join(cfg.levels.iter().map(u32::to_string).collect())),
        ("ref_level".into(), cfg.ref_level.to_string()),
        ("ref_scheme".into(), cfg.ref_scheme.to_string()),
        ("schemes".into(), join(cfg.schemes.iter().map(SchemeKind::to_string).collect())),
        ("paths".into(), cfg.num_paths.to_string()),
        ("seed".into(), cfg.seed.to_string()),
        ("metric".into(), metric_name(cfg.metric).into()),
        ("noise".into(), noise_name(cfg.noise).into()),
    ]);
    out
}
