//! Training configuration and its `key=value` text form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chc::ChcConfig;
use crate::error::{Error, Result};
use crate::induction::InductionConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub induction: InductionConfig,
    pub chc: ChcConfig,
    /// Upper bound on the number of quantiles; fewer are used when the
    /// training set has fewer examples.
    pub quantiles: usize,
    /// Skip rule selection.
    pub lightweight: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            induction: InductionConfig::default(),
            chc: ChcConfig::default(),
            quantiles: 1000,
            lightweight: false,
        }
    }
}

pub const KEYS: [&str; 17] = [
    "fuzzy_sets",
    "max_len",
    "prop",
    "min_conf_crisp",
    "min_conf_fuzzy",
    "gamma",
    "population",
    "evaluations",
    "max_restarts",
    "delta",
    "restart_gamma",
    "phi",
    "cost_sensitive",
    "quantiles",
    "seed",
    "lightweight",
    "debug_itemsets",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean {value:?} for {key}"))),
    }
}

impl Config {
    /// Parses `key=value` lines over the defaults. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut prop_given = false;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {line:?}", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "prop" {
                prop_given = true;
            }
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {}", n + 1, strip(e))))?;
        }
        // a different max_len without an explicit prop spreads it uniformly
        if !prop_given && cfg.induction.max_len != cfg.induction.prop.len() {
            let len = cfg.induction.max_len;
            cfg.induction.prop = vec![1.0 / len as f64; len];
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let ind = &mut self.induction;
        let chc = &mut self.chc;
        match key {
            "fuzzy_sets" => ind.fuzzy_sets = parse_value(key, value)?,
            "max_len" => ind.max_len = parse_value(key, value)?,
            "prop" => {
                ind.prop = value
                    .split(',')
                    .map(|v| parse_value(key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "min_conf_crisp" => ind.min_conf_crisp = parse_value(key, value)?,
            "min_conf_fuzzy" => ind.min_conf_fuzzy = parse_value(key, value)?,
            "gamma" => ind.gamma = parse_value(key, value)?,
            "cost_sensitive" => ind.cost_sensitive = parse_bool(key, value)?,
            "debug_itemsets" => ind.keep_itemsets = parse_bool(key, value)?,
            "population" => chc.population = parse_value(key, value)?,
            "evaluations" => chc.max_evaluations = parse_value(key, value)?,
            "max_restarts" => chc.max_restarts = parse_value(key, value)?,
            "delta" => chc.delta = parse_value(key, value)?,
            "restart_gamma" => chc.restart_gamma = parse_value(key, value)?,
            "phi" => chc.phi = parse_value(key, value)?,
            "seed" => chc.seed = parse_value(key, value)?,
            "quantiles" => self.quantiles = parse_value(key, value)?,
            "lightweight" => self.lightweight = parse_bool(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.induction.validate()?;
        self.chc.validate()?;
        if self.quantiles < 2 {
            return Err(Error::Config(format!("quantiles must be at least 2, got {}", self.quantiles)));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.chc.seed
    }

    pub fn to_text(&self) -> String {
        let ind = &self.induction;
        let chc = &self.chc;
        let prop: Vec<String> = ind.prop.iter().map(|p| p.to_string()).collect();
        let lines = [
            format!("fuzzy_sets={}", ind.fuzzy_sets),
            format!("max_len={}", ind.max_len),
            format!("prop={}", prop.join(",")),
            format!("min_conf_crisp={}", ind.min_conf_crisp),
            format!("min_conf_fuzzy={}", ind.min_conf_fuzzy),
            format!("gamma={}", ind.gamma),
            format!("population={}", chc.population),
            format!("evaluations={}", chc.max_evaluations),
            format!("max_restarts={}", chc.max_restarts),
            format!("delta={}", chc.delta),
            format!("restart_gamma={}", chc.restart_gamma),
            format!("phi={}", chc.phi),
            format!("cost_sensitive={}", ind.cost_sensitive),
            format!("quantiles={}", self.quantiles),
            format!("seed={}", chc.seed),
            format!("lightweight={}", self.lightweight),
        ];
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}
