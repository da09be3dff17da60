//! The subcommands, as functions returning their rendered output.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use peerlens_core::decision::{
    announcement_grid_point, announcement_problem, generalized_scoring, instrumental_value, uncertainty,
    DecisionProblem,
};
use peerlens_core::rng::substream;
use peerlens_core::scenarios::{
    heterogeneity_theorem_check, lone_wolf_private_landscape, lone_wolf_public_landscape, mars_scenario,
    optimize_question, run_simulation, SimulationConfig, TheoremReport,
};
use peerlens_core::{divergence, entropy, scoring_function, Belief, Criterion, Rule, StateSpace};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::format::{format_value, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LandscapeMode {
    Private,
    Public,
}

impl FromStr for LandscapeMode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "private" => Ok(Self::Private),
            "public" => Ok(Self::Public),
            other => bail!("unknown landscape mode `{other}` (expected private or public)"),
        }
    }
}

impl fmt::Display for LandscapeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Private => "private",
            Self::Public => "public",
        })
    }
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_mars(json: bool) -> Result<String> {
    let values = mars_scenario()?;
    if json {
        let map: serde_json::Map<String, Value> =
            values.rows().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        return Ok(to_json(&Value::Object(map)));
    }
    let mut csv = Csv::new(&["name", "value"]);
    for (name, value) in values.rows() {
        csv.row([name.to_owned(), format_value(value)]);
    }
    Ok(csv.finish())
}

pub fn cmd_landscape(cfg: &RunConfig, mode: LandscapeMode, json: bool) -> Result<String> {
    let setup = cfg.model_setup()?;
    let grid = cfg.landscape_grid;
    match mode {
        LandscapeMode::Private => {
            let curve = lone_wolf_private_landscape(&setup, grid)?;
            if json {
                return Ok(to_json(&serde_json::to_value(&curve)?));
            }
            let mut csv = Csv::new(&["p", "value"]);
            for pt in curve {
                csv.row([format_value(pt.p), format_value(pt.value)]);
            }
            Ok(csv.finish())
        }
        LandscapeMode::Public => {
            let surface = lone_wolf_public_landscape(&setup, grid)?;
            if json {
                return Ok(to_json(&serde_json::to_value(&surface)?));
            }
            let mut csv = Csv::new(&["p", "r", "value"]);
            for c in surface {
                csv.row([format_value(c.p), format_value(c.r), format_value(c.value)]);
            }
            Ok(csv.finish())
        }
    }
}

pub const SIMULATION_COLUMNS: [&str; 8] = [
    "m",
    "q_maj",
    "q_min",
    "investigator_belief",
    "favored_claim",
    "community_mean",
    "community_sd",
    "criterion_value",
];

pub fn simulation_config(cfg: &RunConfig, criterion: Criterion) -> Result<SimulationConfig> {
    Ok(SimulationConfig {
        n_investigators: cfg.investigators,
        n_candidates: cfg.candidates,
        criterion,
        setup: cfg.model_setup()?,
        seed: cfg.seed,
    })
}

pub fn cmd_simulate(cfg: &RunConfig, criterion: Criterion, json: bool) -> Result<String> {
    let records = run_simulation(&simulation_config(cfg, criterion)?)?;
    if json {
        let rows: Vec<Value> = records
            .iter()
            .map(|r| {
                json!({
                    "m": r.question.majority_fraction,
                    "q_maj": r.question.majority_belief,
                    "q_min": r.question.minority_belief,
                    "investigator_belief": r.investigator_belief,
                    "favored_claim": r.favored_claim,
                    "community_mean": r.community_mean,
                    "community_sd": r.community_sd,
                    "criterion_value": r.criterion_value,
                })
            })
            .collect();
        return Ok(to_json(&Value::Array(rows)));
    }
    let mut csv = Csv::new(&SIMULATION_COLUMNS);
    for r in records {
        csv.row([
            format_value(r.question.majority_fraction),
            format_value(r.question.majority_belief),
            format_value(r.question.minority_belief),
            format_value(r.investigator_belief),
            r.favored_claim.to_string(),
            format_value(r.community_mean),
            format_value(r.community_sd),
            format_value(r.criterion_value),
        ]);
    }
    Ok(csv.finish())
}

pub fn cmd_optimal(cfg: &RunConfig, criterion: Criterion, json: bool) -> Result<String> {
    let opt = optimize_question(&cfg.model_setup()?, criterion, cfg.optimize_grid)?;
    let value = json!({
        "criterion": criterion.name(),
        "grid": cfg.optimize_grid,
        "m": opt.question.majority_fraction,
        "q_maj": opt.question.majority_belief,
        "q_min": opt.question.minority_belief,
        "investigator_belief": opt.investigator_belief,
        "community_mean": opt.community_mean,
        "community_sd": opt.community_sd,
        "value": opt.value,
    });
    if json {
        return Ok(to_json(&value));
    }
    let mut csv = Csv::new(&["name", "value"]);
    csv.row(["criterion".to_owned(), criterion.name().to_owned()]);
    csv.row(["grid".to_owned(), cfg.optimize_grid.to_string()]);
    csv.row(["m".to_owned(), format_value(opt.question.majority_fraction)]);
    csv.row(["q_maj".to_owned(), format_value(opt.question.majority_belief)]);
    csv.row(["q_min".to_owned(), format_value(opt.question.minority_belief)]);
    csv.row([
        "investigator_belief".to_owned(),
        opt.investigator_belief.map_or_else(|| "none".to_owned(), format_value),
    ]);
    csv.row(["community_mean".to_owned(), format_value(opt.community_mean)]);
    csv.row(["community_sd".to_owned(), format_value(opt.community_sd)]);
    csv.row(["value".to_owned(), format_value(opt.value)]);
    Ok(csv.finish())
}

/// Outcome of one property in `propcheck`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropcheckReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub theorem: Vec<TheoremReport>,
}

impl PropcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return to_json(&serde_json::to_value(self).expect("serializable"));
        }
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {} ({})\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} of {} checks passed ({} trials, seed {})\n",
            self.checks.len() - failed,
            self.checks.len(),
            self.trials,
            self.seed
        ));
        out
    }
}

/// Margin below which a strict heterogeneity inequality counts as failed.
pub const THEOREM_MARGIN: f64 = 1e-6;

struct Tally {
    name: &'static str,
    violations: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, violations: 0, worst: 0.0 }
    }

    /// Records a deviation; anything above `tol` is a violation.
    fn observe(&mut self, deviation: f64, tol: f64) {
        if !(deviation <= tol) {
            self.violations += 1;
        }
        if deviation.is_nan() || deviation > self.worst {
            self.worst = deviation;
        }
    }

    fn finish(self, trials: usize) -> CheckResult {
        CheckResult {
            name: self.name.to_owned(),
            passed: self.violations == 0,
            detail: format!("{} violations in {trials} trials, worst {:e}", self.violations, self.worst),
        }
    }
}

fn kl_bits(p: f64, q: f64) -> f64 {
    let term = |a: f64, c: f64| if a == 0.0 { 0.0 } else { a * (a / c).log2() };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

fn scoring_checks(trials: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = substream(seed, 0);
    let mut propriety = Tally::new("scoring: strict propriety");
    let mut brier = Tally::new("scoring: Brier divergence = (p1 - p2)^2");
    let mut kl = Tally::new("scoring: Ignorance divergence = KL");
    let mut decomposition = Tally::new("scoring: S(R,P) = e(P) + d(P||R)");
    let mut concavity = Tally::new("scoring: entropy concavity");
    let b = |p: f64| Belief::binary(p);
    for _ in 0..trials {
        let (p1, p2): (f64, f64) = loop {
            let a: f64 = rng.random_range(1e-6..1.0 - 1e-6);
            let c: f64 = rng.random_range(1e-6..1.0 - 1e-6);
            if (a - c).abs() > 1e-6 {
                break (a, c);
            }
        };
        let lambda = rng.random_range(0.01..0.99);
        for rule in Rule::ALL {
            propriety.observe(-divergence(&rule, &b(p2)?, &b(p1)?)?, -f64::MIN_POSITIVE);
            let s = scoring_function(&rule, &b(p1)?, &b(p2)?)?;
            let split = entropy(&rule, &b(p2)?)? + divergence(&rule, &b(p2)?, &b(p1)?)?;
            decomposition.observe((s - split).abs(), 1e-12);
            let mixed = entropy(&rule, &b(lambda * p1 + (1.0 - lambda) * p2)?)?;
            let chord = lambda * entropy(&rule, &b(p1)?)? + (1.0 - lambda) * entropy(&rule, &b(p2)?)?;
            let floor = if (p1 - p2).abs() > 0.05 { 1e-10 } else { -1e-12 };
            concavity.observe(floor - (mixed - chord), 0.0);
        }
        let d = divergence(&Rule::Brier, &b(p2)?, &b(p1)?)?;
        brier.observe((d - (p1 - p2).powi(2)).abs(), 1e-12);
        let d = divergence(&Rule::Ignorance, &b(p2)?, &b(p1)?)?;
        kl.observe((d - kl_bits(p2, p1)).abs(), 1e-9);
    }
    Ok([propriety, brier, kl, decomposition, concavity]
        .into_iter()
        .map(|t| t.finish(trials))
        .collect())
}

fn decision_checks(trials: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = substream(seed, 1);
    let grid = 101;
    let announce = announcement_problem(&Rule::Brier, grid)?;
    let matching = DecisionProblem::matching(&StateSpace::binary());
    let mut recovery = Tally::new("decision: announcement value recovers Brier divergence");
    let mut nonneg = Tally::new("decision: instrumental value >= 0");
    let mut concave = Tally::new("decision: uncertainty concavity");
    let mut dominance = Tally::new("decision: C(R,P) >= c(P)");
    for _ in 0..trials {
        let q = Belief::binary(announcement_grid_point(rng.random_range(0..grid), grid))?;
        let p = Belief::binary(announcement_grid_point(rng.random_range(0..grid), grid))?;
        let v = instrumental_value(&announce, &q, &p)?;
        recovery.observe((v - divergence(&Rule::Brier, &q, &p)?).abs(), 1e-3);

        let (a, c, lambda): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let (pa, pc) = (Belief::binary(a)?, Belief::binary(c)?);
        let mix = Belief::binary(lambda * a + (1.0 - lambda) * c)?;
        for dp in [&announce, &matching] {
            nonneg.observe(-instrumental_value(dp, &pa, &pc)?, 0.0);
            let chord = lambda * uncertainty(dp, &pa)? + (1.0 - lambda) * uncertainty(dp, &pc)?;
            concave.observe(chord - uncertainty(dp, &mix)?, 1e-12);
            dominance.observe(uncertainty(dp, &pc)? - generalized_scoring(dp, &pa, &pc)?, 1e-12);
        }
    }
    Ok([recovery, nonneg, concave, dominance]
        .into_iter()
        .map(|t| t.finish(trials))
        .collect())
}

pub fn cmd_propcheck(trials: usize, seed: u64) -> Result<PropcheckReport> {
    let mut checks = scoring_checks(trials, seed)?;
    checks.extend(decision_checks(trials, seed)?);
    let mut theorem = Vec::new();
    for (k, rule) in Rule::ALL.into_iter().enumerate() {
        let report = heterogeneity_theorem_check(rule, trials, &mut substream(seed, 2 + k as u64))?;
        let margin = |m: Option<f64>| m.map_or_else(|| "n/a".to_owned(), |v| format!("{v:e}"));
        checks.push(CheckResult {
            name: format!("theorem: heterogeneity lowers private, raises public value ({rule})"),
            passed: report.holds(THEOREM_MARGIN),
            detail: format!(
                "{} violations in {trials} trials, min margins private {} public {}, degenerate gap {:e}",
                report.violations,
                margin(report.min_private_margin),
                margin(report.min_public_margin),
                report.degenerate_gap
            ),
        });
        theorem.push(report);
    }
    Ok(PropcheckReport {
        trials,
        seed,
        checks,
        theorem,
    })
}
