use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use peerlens_core::{Criterion, Rule};
use serde_json::json;

use crate::commands::{cmd_landscape, cmd_mars, cmd_optimal, cmd_propcheck, cmd_simulate, LandscapeMode};
use crate::config::RunConfig;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "PEERLENS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "peerlens", version, about = "How ex ante and ex post peer review value experiments")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub model: ModelArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Outcome mean when X = 0.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu0: Option<f64>,
    /// Outcome mean when X = 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu1: Option<f64>,
    /// Outcome standard deviation, shared by both states.
    #[arg(long = "sigma-y", global = true)]
    pub sigma_y: Option<f64>,
    /// Scoring rule: brier or ignorance.
    #[arg(long, global = true)]
    pub rule: Option<Rule>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file (plus a `.meta.json` sidecar) instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The five valuations of the Mars example.
    Mars {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lone-investigator value landscapes.
    Landscape {
        /// private (curve over p) or public (surface over p and r).
        #[arg(long)]
        mode: LandscapeMode,
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Community simulation: each investigator picks the best of a few sampled questions.
    Simulate {
        /// investigator-public, reviewer-private or reviewer-public.
        #[arg(long)]
        criterion: Criterion,
        #[arg(long)]
        investigators: Option<usize>,
        #[arg(long)]
        candidates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Grid search for the best question under a criterion.
    Optimal {
        #[arg(long)]
        criterion: Criterion,
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Randomized property checks of the scoring, decision and heterogeneity results.
    Propcheck {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Cli {
    /// Effective configuration: defaults, then the config file, then flags.
    pub fn effective_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let m = &self.model;
        if let Some(v) = m.mu0 {
            cfg.experiment.mu0 = v;
        }
        if let Some(v) = m.mu1 {
            cfg.experiment.mu1 = v;
        }
        if let Some(v) = m.sigma_y {
            cfg.experiment.sigma_y = v;
        }
        if let Some(r) = m.rule {
            cfg.rule = r;
        }
        match &self.command {
            Command::Mars { .. } => {}
            Command::Landscape { grid, .. } => {
                if let Some(g) = grid {
                    cfg.landscape_grid = *g;
                }
            }
            Command::Simulate {
                investigators,
                candidates,
                seed,
                ..
            } => {
                if let Some(n) = investigators {
                    cfg.investigators = *n;
                }
                if let Some(n) = candidates {
                    cfg.candidates = *n;
                }
                if let Some(s) = seed {
                    cfg.seed = *s;
                }
            }
            Command::Optimal { grid, .. } => {
                if let Some(g) = grid {
                    cfg.optimize_grid = *g;
                }
            }
            Command::Propcheck { trials, seed, .. } => {
                if let Some(t) = trials {
                    cfg.trials = *t;
                }
                if let Some(s) = seed {
                    cfg.seed = *s;
                }
            }
        }
        if let Some(out) = &self.output().out {
            cfg.output = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn output(&self) -> &OutputArgs {
        match &self.command {
            Command::Mars { output }
            | Command::Landscape { output, .. }
            | Command::Simulate { output, .. }
            | Command::Optimal { output, .. }
            | Command::Propcheck { output, .. } => output,
        }
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::Mars { .. } => "mars",
            Command::Landscape { .. } => "landscape",
            Command::Simulate { .. } => "simulate",
            Command::Optimal { .. } => "optimal",
            Command::Propcheck { .. } => "propcheck",
        }
    }
}

/// Path of the metadata sidecar written next to `out`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn emit(cli: &Cli, cfg: &RunConfig, text: &str, extra: serde_json::Value) -> Result<()> {
    match &cfg.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            let meta = json!({
                "command": cli.name(),
                "version": env!("CARGO_PKG_VERSION"),
                "json": cli.output().json,
                "arguments": extra,
                "config": cfg,
            });
            let sidecar = sidecar_path(path);
            let mut body = serde_json::to_string_pretty(&meta)?;
            body.push('\n');
            fs::write(&sidecar, body).with_context(|| format!("writing {}", sidecar.display()))?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
        if n == 0 {
            anyhow::bail!("{THREADS_ENV} must be at least 1");
        }
        // Fails only if a pool already exists, in which case it stays.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<ExitCode> {
    configure_threads()?;
    let cfg = cli.effective_config()?;
    let json = cli.output().json;
    match &cli.command {
        Command::Mars { .. } => {
            let text = cmd_mars(json)?;
            if cfg.output.is_some() {
                std::io::stdout().write_all(text.as_bytes())?;
            }
            emit(cli, &cfg, &text, json!({}))?;
        }
        Command::Landscape { mode, .. } => {
            let text = cmd_landscape(&cfg, *mode, json)?;
            emit(cli, &cfg, &text, json!({ "mode": mode }))?;
        }
        Command::Simulate { criterion, .. } => {
            let text = cmd_simulate(&cfg, *criterion, json)?;
            emit(cli, &cfg, &text, json!({ "criterion": criterion }))?;
        }
        Command::Optimal { criterion, .. } => {
            let text = cmd_optimal(&cfg, *criterion, json)?;
            emit(cli, &cfg, &text, json!({ "criterion": criterion }))?;
        }
        Command::Propcheck { .. } => {
            let report = cmd_propcheck(cfg.trials, cfg.seed)?;
            let text = report.render(json);
            if cfg.output.is_some() && !json {
                std::io::stdout().write_all(text.as_bytes())?;
            }
            emit(cli, &cfg, &text, json!({}))?;
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
