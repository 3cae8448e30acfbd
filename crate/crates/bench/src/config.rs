//! Experiment configuration.
//!
//! Config files are flat `key = value` lines; `#` starts a comment and blank
//! lines are ignored. Keys: `generator` (`gaussian` | `graph`), `m`, `n`,
//! `k`, `k_max`, `k_step`, `k_values` (comma list, used when `k` is absent),
//! `trials`, `c`, `algos` (comma list), `seed`, `out`. Command-line flags
//! override file values key by key.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use subsel_core::GraphSpec;

use crate::algorithm::{parse_algorithms, Algorithm};
use crate::error::{usage, RunError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Gaussian,
    Graph,
}

impl FromStr for GeneratorKind {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        match s.trim() {
            "gaussian" => Ok(GeneratorKind::Gaussian),
            "graph" => Ok(GeneratorKind::Graph),
            other => Err(usage(format!("unknown generator '{other}' (gaussian | graph)"))),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::Gaussian => "gaussian",
            GeneratorKind::Graph => "graph",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub generator: GeneratorKind,
    pub m: usize,
    pub n: usize,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub c: f64,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.m == 0 || self.m > self.n {
            return Err(usage(format!("need 1 <= m <= n, got m={} n={}", self.m, self.n)));
        }
        if self.k_values.is_empty() {
            return Err(usage("no k values"));
        }
        if let Some(k) = self.k_values.iter().find(|&&k| k < self.m || k > self.n) {
            return Err(usage(format!("k = {k} outside [m, n] = [{}, {}]", self.m, self.n)));
        }
        if self.trials == 0 {
            return Err(usage("trials must be at least 1"));
        }
        if !self.c.is_finite() || self.c < 1.0 {
            return Err(usage(format!("c must be a finite value >= 1, got {}", self.c)));
        }
        if self.algorithms.is_empty() {
            return Err(usage("no algorithms selected"));
        }
        if self
            .algorithms
            .iter()
            .any(|a| a.init == subsel_core::InitKind::Advanced)
            && self.n < 2 * self.m - 1
        {
            return Err(usage("advanced initialization needs n >= 2m - 1"));
        }
        if self.generator == GeneratorKind::Graph {
            GraphSpec::new(self.m + 1, self.n, 0)
                .validate()
                .map_err(|e| usage(e.to_string()))?;
        }
        Ok(())
    }
}

/// Partially specified configuration, as read from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub generator: Option<GeneratorKind>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub k_max: Option<usize>,
    pub k_step: Option<usize>,
    pub k_values: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub c: Option<f64>,
    pub algorithms: Option<Vec<Algorithm>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, RunError> {
    value
        .trim()
        .parse()
        .map_err(|_| usage(format!("invalid value '{value}' for {key}")))
}

impl ConfigOverrides {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| usage(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), RunError> {
        match key {
            "generator" => self.generator = Some(value.parse()?),
            "m" => self.m = Some(parse_num(key, value)?),
            "n" => self.n = Some(parse_num(key, value)?),
            "k" => self.k = Some(parse_num(key, value)?),
            "k_max" => self.k_max = Some(parse_num(key, value)?),
            "k_step" => self.k_step = Some(parse_num(key, value)?),
            "k_values" => {
                let ks = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<Vec<usize>, _>>()?;
                self.k_values = Some(ks);
            }
            "trials" => self.trials = Some(parse_num(key, value)?),
            "c" => self.c = Some(parse_num(key, value)?),
            "algos" => self.algorithms = Some(parse_algorithms(value)?),
            "seed" => self.seed = Some(parse_num(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(usage(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Values present in `top` win over those in `self`.
    pub fn overlay(self, top: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            generator: top.generator.or(self.generator),
            m: top.m.or(self.m),
            n: top.n.or(self.n),
            k: top.k.or(self.k),
            k_max: top.k_max.or(self.k_max),
            k_step: top.k_step.or(self.k_step),
            k_values: top.k_values.or(self.k_values),
            trials: top.trials.or(self.trials),
            c: top.c.or(self.c),
            algorithms: top.algorithms.or(self.algorithms),
            seed: top.seed.or(self.seed),
            out: top.out.or(self.out),
        }
    }

    /// Fills gaps with defaults (`gaussian`, `m = 10`, `n = 200`, `k = m`,
    /// one trial, `c = 1`, the six exchange algorithms, seed 0) and validates.
    pub fn resolve(self) -> Result<ExperimentConfig, RunError> {
        let m = self.m.unwrap_or(10);
        let k_values = match (self.k, self.k_values) {
            (Some(k), _) => {
                let k_max = self.k_max.unwrap_or(k);
                let step = self.k_step.unwrap_or(1);
                if step == 0 {
                    return Err(usage("k_step must be positive"));
                }
                if k_max < k {
                    return Err(usage(format!("k_max = {k_max} is below k = {k}")));
                }
                (k..=k_max).step_by(step).collect()
            }
            (None, Some(list)) => list,
            (None, None) => vec![m],
        };
        let cfg = ExperimentConfig {
            generator: self.generator.unwrap_or(GeneratorKind::Gaussian),
            m,
            n: self.n.unwrap_or(200),
            k_values,
            trials: self.trials.unwrap_or(1),
            c: self.c.unwrap_or(1.0),
            algorithms: self.algorithms.unwrap_or_else(Algorithm::table),
            seed: self.seed.unwrap_or(0),
            output_path: self.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
