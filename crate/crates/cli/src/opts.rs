//! Flag groups shared across subcommands and config-file resolution.
//!
//! Every value resolves with the same precedence: command line, then the
//! optional JSON config file, then (for the seed) the QHASH_SEED
//! environment variable, then the built-in default.

use std::path::Path;

use qhash_core::{DetectorModel, LossPolicy, SearchConfig, Strategy};
use serde_json::{Map, Value};

pub type CliError = Box<dyn std::error::Error>;

pub const DEFAULT_SEED: u64 = 7;

/// Flat key → value map loaded from the optional JSON config file. Keys are
/// the long flag names (e.g. `"q"`, `"budget"`, `"loss-policy"`).
pub struct FileConfig(Map<String, Value>);

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self(Map::new())),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
                let value: Value = serde_json::from_str(&text)
                    .map_err(|e| format!("config file {}: {e}", path.display()))?;
                match value {
                    Value::Object(map) => Ok(Self(map)),
                    _ => Err(format!("config file {} must be a JSON object", path.display()).into()),
                }
            }
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| format!("config key {key:?} must be a non-negative integer").into()),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| format!("config key {key:?} must be a number").into()),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_bool()
                .map(Some)
                .ok_or_else(|| format!("config key {key:?} must be a boolean").into()),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| format!("config key {key:?} must be a string").into()),
        }
    }

    /// A list of integers, either a JSON array or a comma-separated string.
    pub fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| format!("config key {key:?}: non-integer entry").into())
                })
                .collect::<Result<Vec<_>, CliError>>()
                .map(Some),
            Some(Value::String(s)) => parse_usize_list(s).map(Some),
            Some(_) => Err(format!("config key {key:?} must be a list").into()),
        }
    }
}

pub fn parse_u64_list(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad list entry {part:?}: {e}").into())
        })
        .collect()
}

pub fn parse_usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    Ok(parse_u64_list(text)?.into_iter().map(|v| v as usize).collect())
}

/// Seed precedence: flag, config file, QHASH_SEED, then the default.
pub fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Some(seed) = file.u64("seed")? {
        return Ok(seed);
    }
    if let Ok(text) = std::env::var("QHASH_SEED") {
        return text
            .parse::<u64>()
            .map_err(|e| format!("QHASH_SEED must be an integer: {e}").into());
    }
    Ok(DEFAULT_SEED)
}

/// Search-strategy flags shared by the optimizing subcommands.
#[derive(Debug, clap::Args)]
pub struct SearchOpts {
    /// Search strategy: exhaustive, random-restart, or annealing.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Candidate-evaluation budget for the stochastic strategies.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Canonicalize results (sort rows and row order).
    #[arg(long)]
    pub symmetry_reduction: Option<bool>,
}

impl SearchOpts {
    pub fn resolve(&self, file: &FileConfig, seed: u64) -> Result<SearchConfig, CliError> {
        let defaults = SearchConfig::default();
        let strategy = match self.strategy.clone().or(file.string("strategy")?) {
            Some(name) => name.parse::<Strategy>()?,
            None => defaults.strategy,
        };
        let config = SearchConfig {
            strategy,
            budget: self.budget.or(file.u64("budget")?).unwrap_or(defaults.budget),
            seed,
            symmetry_reduction: self
                .symmetry_reduction
                .or(file.bool("symmetry-reduction")?)
                .unwrap_or(defaults.symmetry_reduction),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Detector-model flags shared by the simulating subcommands.
#[derive(Debug, clap::Args)]
pub struct ModelOpts {
    /// Start from ideal detectors (unit efficiency, no noise) instead of
    /// the reference hardware defaults.
    #[arg(long)]
    pub ideal: bool,
    #[arg(long)]
    pub eta_signal: Option<f64>,
    #[arg(long)]
    pub eta_idler: Option<f64>,
    /// Dark-count rates in Hz.
    #[arg(long)]
    pub dark_signal: Option<f64>,
    #[arg(long)]
    pub dark_idler: Option<f64>,
    /// Coincidence window in seconds.
    #[arg(long)]
    pub window: Option<f64>,
    /// Heralded pair rate in Hz.
    #[arg(long)]
    pub pair_rate: Option<f64>,
    /// Dead times in seconds.
    #[arg(long)]
    pub dead_signal: Option<f64>,
    #[arg(long)]
    pub dead_idler: Option<f64>,
    /// Loss policy: resend, count-as-error, or discard.
    #[arg(long)]
    pub loss_policy: Option<String>,
}

impl ModelOpts {
    pub fn resolve(&self, file: &FileConfig) -> Result<DetectorModel, CliError> {
        let ideal = self.ideal || file.bool("ideal")?.unwrap_or(false);
        let base = if ideal { DetectorModel::ideal() } else { DetectorModel::default() };
        let policy = match self.loss_policy.clone().or(file.string("loss-policy")?) {
            Some(name) => name.parse::<LossPolicy>()?,
            None => base.loss_policy,
        };
        let model = DetectorModel {
            eta_signal: self.eta_signal.or(file.f64("eta-signal")?).unwrap_or(base.eta_signal),
            eta_idler: self.eta_idler.or(file.f64("eta-idler")?).unwrap_or(base.eta_idler),
            dark_rate_signal: self
                .dark_signal
                .or(file.f64("dark-signal")?)
                .unwrap_or(base.dark_rate_signal),
            dark_rate_idler: self
                .dark_idler
                .or(file.f64("dark-idler")?)
                .unwrap_or(base.dark_rate_idler),
            coincidence_window: self
                .window
                .or(file.f64("window")?)
                .unwrap_or(base.coincidence_window),
            pair_rate: self.pair_rate.or(file.f64("pair-rate")?).unwrap_or(base.pair_rate),
            dead_time_signal: self
                .dead_signal
                .or(file.f64("dead-signal")?)
                .unwrap_or(base.dead_time_signal),
            dead_time_idler: self
                .dead_idler
                .or(file.f64("dead-idler")?)
                .unwrap_or(base.dead_time_idler),
            loss_policy: policy,
        };
        model.validate()?;
        Ok(model)
    }
}
