//! Run configuration: a single JSON document whose fields can each be
//! overridden from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use peerlens_core::{Experiment, ModelSetup, Rule};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma_y: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mu0: 0.0,
            mu1: 2.0,
            sigma_y: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub rule: Rule,
    /// Points per axis for `landscape`.
    pub landscape_grid: usize,
    /// Points per axis for `optimal`.
    pub optimize_grid: usize,
    pub investigators: usize,
    pub candidates: usize,
    pub seed: u64,
    /// Random instances per property in `propcheck`.
    pub trials: usize,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentConfig::default(),
            rule: Rule::Brier,
            landscape_grid: 101,
            optimize_grid: 101,
            investigators: 50,
            candidates: 15,
            seed: 42,
            trials: 1000,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("parsing config JSON")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        self.model_setup()?;
        if self.landscape_grid < 3 || self.optimize_grid < 3 {
            bail!("grid sizes must be at least 3");
        }
        if self.investigators == 0 || self.candidates == 0 {
            bail!("investigators and candidates must be at least 1");
        }
        Ok(())
    }

    pub fn model_setup(&self) -> Result<ModelSetup> {
        let e = self.experiment;
        let experiment = Experiment::gaussian_binary(e.mu0, e.mu1, e.sigma_y)?;
        Ok(ModelSetup::new(experiment, self.rule))
    }
}
