//! Experiment configuration: a JSON document naming an experiment and a flat
//! parameter map, validated against the experiment's schema.
//!
//! ```json
//! {
//!   "experiment": "fig5_entropies",
//!   "seed": 7,
//!   "parameters": { "g0": 2.0, "sigmas": [0.064, 0.512], "t_max": 12 }
//! }
//! ```
//!
//! Missing parameters take schema defaults; unknown keys, at the top level or
//! inside `parameters`, are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::RunError;
use crate::experiments::Experiment;

/// One parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    /// Scalar.
    Number(f64),
    /// Text choice.
    Text(String),
    /// Sweep values.
    List(Vec<f64>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Text(s) => write!(f, "\"{s}\""),
            ParamValue::List(v) => write!(f, "{v:?}"),
        }
    }
}

/// Config as written by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name, see [`Experiment::ALL`].
    pub experiment: String,
    /// Parameter overrides.
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    /// Master seed of every random stream.
    #[serde(default)]
    pub seed: u64,
    /// Directory receiving the CSVs and the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Default written into the schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DefaultValue {
    /// Scalar default.
    Number(f64),
    /// Sweep default.
    List(&'static [f64]),
    /// Text default.
    Text(&'static str),
}

impl DefaultValue {
    fn value(self) -> ParamValue {
        match self {
            DefaultValue::Number(x) => ParamValue::Number(x),
            DefaultValue::List(v) => ParamValue::List(v.to_vec()),
            DefaultValue::Text(s) => ParamValue::Text(s.to_string()),
        }
    }
}

/// Admissible range of a parameter. Applies elementwise to lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    /// Any finite number.
    Finite,
    /// `x ≥ 0`.
    NonNegative,
    /// `x > 0`.
    Positive,
    /// `0 < x < 1`.
    OpenUnit,
    /// Integer `≥ min`.
    Count(u64),
    /// Fock truncation: integer `≥ 16`, power of two recommended.
    Levels,
    /// One of the listed strings.
    OneOf(&'static [&'static str]),
}

/// Schema entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    /// Key in `parameters`.
    pub key: &'static str,
    /// Value used when the key is absent.
    pub default: DefaultValue,
    /// Range check.
    pub rule: Rule,
    /// Unit or meaning, shown by `list`.
    pub help: &'static str,
}

impl ParamSpec {
    /// Scalar parameter.
    pub const fn number(key: &'static str, default: f64, rule: Rule, help: &'static str) -> Self {
        Self {
            key,
            default: DefaultValue::Number(default),
            rule,
            help,
        }
    }

    /// Sweep parameter.
    pub const fn list(
        key: &'static str,
        default: &'static [f64],
        rule: Rule,
        help: &'static str,
    ) -> Self {
        Self {
            key,
            default: DefaultValue::List(default),
            rule,
            help,
        }
    }

    /// Text parameter.
    pub const fn text(
        key: &'static str,
        default: &'static str,
        choices: &'static [&'static str],
        help: &'static str,
    ) -> Self {
        Self {
            key,
            default: DefaultValue::Text(default),
            rule: Rule::OneOf(choices),
            help,
        }
    }

    fn is_list(&self) -> bool {
        matches!(self.default, DefaultValue::List(_))
    }

    fn check_number(&self, x: f64, errors: &mut Vec<String>, warnings: &mut Vec<String>) {
        let key = self.key;
        if !x.is_finite() {
            errors.push(format!("{key} must be finite"));
            return;
        }
        match self.rule {
            Rule::Finite | Rule::OneOf(_) => {}
            Rule::NonNegative if x < 0.0 => errors.push(format!("{key} must be non-negative")),
            Rule::Positive if x <= 0.0 => errors.push(format!("{key} must be positive")),
            Rule::OpenUnit if !(x > 0.0 && x < 1.0) => {
                errors.push(format!("{key} must lie strictly between 0 and 1"))
            }
            Rule::Count(min) if x.fract() != 0.0 || x < min as f64 => {
                errors.push(format!("{key} must be an integer >= {min}"))
            }
            Rule::Levels if x.fract() != 0.0 || x < 16.0 => {
                errors.push(format!("{key} must be an integer >= 16"))
            }
            Rule::Levels if !(x as u64).is_power_of_two() => warnings.push(format!(
                "{key} = {x} is not a power of two; power-of-two truncations are recommended"
            )),
            _ => {}
        }
    }

    fn check(&self, value: &ParamValue, errors: &mut Vec<String>, warnings: &mut Vec<String>) {
        let key = self.key;
        match (value, self.rule) {
            (ParamValue::Text(s), Rule::OneOf(choices)) => {
                if !choices.contains(&s.as_str()) {
                    errors.push(format!("{key} must be one of {}", choices.join(", ")));
                }
            }
            (_, Rule::OneOf(choices)) => {
                errors.push(format!("{key} must be one of {}", choices.join(", ")))
            }
            (ParamValue::Text(_), _) => errors.push(format!("{key} must be a number")),
            (ParamValue::Number(x), _) => self.check_number(*x, errors, warnings),
            (ParamValue::List(_), _) if !self.is_list() => {
                errors.push(format!("{key} must be a single number, not a list"))
            }
            (ParamValue::List(v), _) => {
                if v.is_empty() {
                    errors.push(format!("{key} must not be empty"));
                }
                for &x in v {
                    self.check_number(x, errors, warnings);
                }
            }
        }
    }
}

/// Outcome of [`ExperimentConfig::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Validation {
    /// Fatal problems.
    pub errors: Vec<String>,
    /// Advisory notes.
    pub warnings: Vec<String>,
}

impl Validation {
    /// `true` when there are no errors.
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Fully resolved parameters: every schema key present, in key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    /// Schema defaults overridden by `overrides`, without validation.
    pub fn resolve(schema: &[ParamSpec], overrides: &BTreeMap<String, ParamValue>) -> Self {
        Self(
            schema
                .iter()
                .map(|s| {
                    let v = overrides
                        .get(s.key)
                        .cloned()
                        .unwrap_or_else(|| s.default.value());
                    (s.key.to_string(), v)
                })
                .collect(),
        )
    }

    fn get(&self, key: &str) -> &ParamValue {
        self.0
            .get(key)
            .unwrap_or_else(|| panic!("parameter `{key}` is not in the schema"))
    }

    /// Scalar value.
    pub fn number(&self, key: &str) -> f64 {
        match self.get(key) {
            ParamValue::Number(x) => *x,
            other => panic!("parameter `{key}` is {other}, expected a number"),
        }
    }

    /// Integer value (validated as such).
    pub fn count(&self, key: &str) -> usize {
        self.number(key) as usize
    }

    /// Sweep values; a scalar reads as a one-element list.
    pub fn list(&self, key: &str) -> Vec<f64> {
        match self.get(key) {
            ParamValue::Number(x) => vec![*x],
            ParamValue::List(v) => v.clone(),
            other => panic!("parameter `{key}` is {other}, expected a list"),
        }
    }

    /// Text value.
    pub fn text(&self, key: &str) -> &str {
        match self.get(key) {
            ParamValue::Text(s) => s,
            other => panic!("parameter `{key}` is {other}, expected text"),
        }
    }

    /// Replaces one value; used by tests and presets.
    pub fn set(&mut self, key: &str, value: ParamValue) {
        self.0.insert(key.to_string(), value);
    }

    /// Underlying map.
    pub fn as_map(&self) -> &BTreeMap<String, ParamValue> {
        &self.0
    }
}

/// Config after validation and default resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    /// Experiment to run.
    pub experiment: Experiment,
    /// Every schema parameter.
    pub params: Params,
    /// Master seed.
    pub seed: u64,
    /// Output directory.
    pub output_dir: PathBuf,
    /// Worker threads.
    pub threads: usize,
    /// Validation warnings.
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    /// Config for `experiment` with all defaults.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment: experiment.name().to_string(),
            parameters: BTreeMap::new(),
            seed: 0,
            output_dir: None,
            threads: None,
        }
    }

    /// Adds a parameter override.
    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    /// Parses a JSON document.
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(vec![e.to_string()]))
    }

    /// Reads and parses a JSON file.
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|source| RunError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Schema and range checks without running anything.
    pub fn validate(&self) -> Validation {
        let mut v = Validation::default();
        let Some(experiment) = Experiment::from_name(&self.experiment) else {
            v.errors.push(format!(
                "unknown experiment `{}`; valid names: {}",
                self.experiment,
                Experiment::ALL.map(|e| e.name()).join(", ")
            ));
            return v;
        };
        let schema = experiment.schema();
        for (key, value) in &self.parameters {
            match schema.iter().find(|s| s.key == key) {
                Some(spec) => spec.check(value, &mut v.errors, &mut v.warnings),
                None => v.errors.push(format!(
                    "unknown parameter `{key}` for {}; valid keys: {}",
                    experiment.name(),
                    schema.iter().map(|s| s.key).collect::<Vec<_>>().join(", ")
                )),
            }
        }
        if self.threads == Some(0) {
            v.errors.push("threads must be at least 1".to_string());
        }
        if v.is_ok() {
            let params = Params::resolve(schema, &self.parameters);
            v.errors.extend(experiment.cross_check(&params));
        }
        v
    }

    /// Validates and fills defaults. Flag overrides take precedence over the file.
    pub fn resolve(
        &self,
        output_dir: Option<PathBuf>,
        seed: Option<u64>,
        threads: Option<usize>,
    ) -> Result<ResolvedConfig, RunError> {
        let mut cfg = self.clone();
        if seed.is_some() {
            cfg.seed = seed.unwrap_or_default();
        }
        if threads.is_some() {
            cfg.threads = threads;
        }
        let v = cfg.validate();
        if !v.is_ok() {
            return Err(RunError::Config(v.errors));
        }
        let experiment = Experiment::from_name(&cfg.experiment).expect("validated");
        let threads = cfg.threads.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
        let output_dir = output_dir
            .or(cfg.output_dir)
            .unwrap_or_else(|| PathBuf::from("output").join(experiment.name()));
        Ok(ResolvedConfig {
            experiment,
            params: Params::resolve(experiment.schema(), &cfg.parameters),
            seed: cfg.seed,
            output_dir,
            threads,
            warnings: v.warnings,
        })
    }
}
