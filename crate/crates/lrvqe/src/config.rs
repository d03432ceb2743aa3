//! Sweep configuration files.
//!
//! A config is a JSON object mirroring the sweep plan plus output options.
//! Every field has a default (the study grid), unknown keys are rejected by
//! name, and the fully resolved form is written back next to the results so
//! a store is self-describing.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::AnsatzKind;
use crate::entanglement::PairStrategy;
use crate::error::{Error, Result};
use crate::sweep::SweepConfig;
use crate::vqe::OptimizerConfig;

pub const DEFAULT_BASE_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSection {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub f_tol: f64,
    pub restarts: usize,
    pub init_scale: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-9,
            f_tol: 1e-12,
            restarts: 5,
            init_scale: 0.1,
        }
    }
}

impl OptimizerSection {
    pub fn to_optimizer(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            f_tol: self.f_tol,
            restarts: self.restarts,
            init_scale: self.init_scale,
            seed,
        }
    }
}

/// Fully resolved configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub sizes: Vec<usize>,
    pub kinds: Vec<AnsatzKind>,
    pub p_max: usize,
    pub threshold: f64,
    pub strategy: PairStrategy,
    pub optimizer: OptimizerSection,
    pub base_seed: u64,
    /// Significant digits in emitted reports.
    pub precision: usize,
    /// Emit two-column plot-data files alongside the CSVs.
    pub plot_data: bool,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 1.5, 10.0],
            lambdas: vec![0.5, 1.0, 2.0],
            sizes: (4..=9).collect(),
            kinds: AnsatzKind::ALL.to_vec(),
            p_max: 60,
            threshold: 1e-3,
            strategy: PairStrategy::Average,
            optimizer: OptimizerSection::default(),
            base_seed: DEFAULT_BASE_SEED,
            precision: 10,
            plot_data: true,
        }
    }
}

impl ConfigFile {
    pub fn validate(&self) -> Result<()> {
        let err = |key: &str, msg: String| Err(Error::Config(format!("{key}: {msg}")));
        if self.alphas.is_empty() {
            return err("alphas", "must not be empty".into());
        }
        for &a in &self.alphas {
            if !a.is_finite() || a < 0.0 {
                return err("alphas", format!("value {a} must be finite and >= 0"));
            }
        }
        if self.lambdas.is_empty() {
            return err("lambdas", "must not be empty".into());
        }
        for &l in &self.lambdas {
            if !l.is_finite() || l < 0.0 {
                return err("lambdas", format!("value {l} must be finite and >= 0"));
            }
        }
        if self.sizes.is_empty() {
            return err("sizes", "must not be empty".into());
        }
        if self.kinds.is_empty() {
            return err("kinds", "must not be empty".into());
        }
        let min_sites = self.kinds.iter().map(|k| k.min_sites()).max().unwrap();
        for &n in &self.sizes {
            if n < min_sites || n > crate::exact::MAX_DENSE_SITES {
                return err(
                    "sizes",
                    format!(
                        "value {n} outside [{min_sites}, {}] for the selected kinds",
                        crate::exact::MAX_DENSE_SITES
                    ),
                );
            }
        }
        if self.p_max < 1 {
            return err("p_max", "must be >= 1".into());
        }
        if !(self.threshold > 0.0) || !self.threshold.is_finite() {
            return err("threshold", format!("value {} must be > 0", self.threshold));
        }
        if self.optimizer.max_iters == 0 {
            return err("optimizer.max_iters", "must be >= 1".into());
        }
        if !(self.optimizer.grad_tol > 0.0) {
            return err("optimizer.grad_tol", "must be > 0".into());
        }
        if !(self.optimizer.f_tol > 0.0) {
            return err("optimizer.f_tol", "must be > 0".into());
        }
        if self.optimizer.restarts < 1 {
            return err("optimizer.restarts", "must be >= 1".into());
        }
        if !(self.optimizer.init_scale > 0.0) {
            return err("optimizer.init_scale", "must be > 0".into());
        }
        if self.precision < 1 || self.precision > 17 {
            return err("precision", "must be in [1, 17]".into());
        }
        Ok(())
    }

    /// Deterministic serialized form written as resolved-config.json.
    pub fn canonical_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("config serializes");
        json.push('\n');
        json
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            alphas: self.alphas.clone(),
            lambdas: self.lambdas.clone(),
            sizes: self.sizes.clone(),
            kinds: self.kinds.clone(),
            p_max: self.p_max,
            threshold: self.threshold,
            strategy: self.strategy,
            optimizer: self.optimizer.to_optimizer(0),
            base_seed: self.base_seed,
        }
    }
}

/// Parse and validate a config document.
pub fn parse_config_str(text: &str) -> Result<ConfigFile> {
    let config: ConfigFile =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Parse and validate a config file from disk.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ConfigFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
