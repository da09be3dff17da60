//! Acceptance suite. Runs every headline criterion at its stated tolerance
//! and time limit, prints one PASS/FAIL line each and exits non-zero if any
//! criterion fails.
//!
//! `cargo test -p peerlens --test acceptance`

use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use peerlens_cli::commands::{cmd_mars, simulation_config};
use peerlens_cli::config::RunConfig;
use peerlens_core::decision::{announcement_grid_point, announcement_problem, instrumental_value};
use peerlens_core::rng::substream;
use peerlens_core::scenarios::{
    candidate_pool, heterogeneity_theorem_check, lone_wolf_private_landscape, lone_wolf_public_landscape,
    optimize_question, run_simulation, EPSILON,
};
use peerlens_core::valuation::{
    private_value_investigator, private_value_reviewers, public_value_investigator, public_value_reviewers,
};
use peerlens_core::{
    divergence, entropy, scoring_function, Belief, CommunityBeliefs, Criterion, Experiment, ModelSetup, Rule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Check {
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<String>,
}

fn main() -> ExitCode {
    let checks = [
        Check { name: "mars example exactness", limit: Duration::from_secs(1), run: mars },
        Check { name: "scoring algebra", limit: Duration::from_secs(5), run: scoring_algebra },
        Check { name: "quadrature vs monte carlo", limit: Duration::from_secs(120), run: quadrature },
        Check { name: "private landscape symmetry", limit: Duration::from_secs(10), run: private_landscape },
        Check { name: "public landscape maximum", limit: Duration::from_secs(120), run: public_landscape },
        Check { name: "heterogeneity theorem", limit: Duration::from_secs(30), run: theorem },
        Check { name: "simulation patterns", limit: Duration::from_secs(60), run: simulation_patterns },
        Check { name: "optimal questions", limit: Duration::from_secs(120), run: optimal_questions },
        Check { name: "decision-theory recovery", limit: Duration::from_secs(10), run: decision_recovery },
    ];
    let mut failed = 0;
    for check in &checks {
        let start = Instant::now();
        let outcome = (check.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(detail) if elapsed <= check.limit => (true, detail),
            Ok(detail) => (false, format!("{detail}; too slow")),
            Err(e) => (false, format!("{e:#}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}: {} [{:.2} s, limit {} s]",
            if ok { "PASS" } else { "FAIL" },
            check.name,
            detail,
            elapsed.as_secs_f64(),
            check.limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn mars() -> Result<String> {
    let out: serde_json::Value = serde_json::from_str(&cmd_mars(true)?)?;
    let expected = [
        ("private_inv", 0.0),
        ("public_inv_no_life", 0.3),
        ("public_inv_life", 0.7),
        ("private_rev", 0.0),
        ("public_rev", 0.42),
    ];
    let mut worst: f64 = 0.0;
    for (key, want) in expected {
        let got = out[key].as_f64().with_context(|| format!("missing {key}"))?;
        let err = (got - want).abs();
        ensure!(err <= 1e-9, "{key} = {got}, expected {want}");
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.1e}"))
}

fn kl_bits(q: f64, p: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).log2() };
    term(q, p) + term(1.0 - q, 1.0 - p)
}

fn scoring_algebra() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c0e);
    let (mut brier, mut kl, mut decomposition) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let p1: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let p2: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let (b1, b2) = (Belief::binary(p1)?, Belief::binary(p2)?);
        brier = brier.max((divergence(&Rule::Brier, &b1, &b2)? - (p1 - p2).powi(2)).abs());
        kl = kl.max((divergence(&Rule::Ignorance, &b1, &b2)? - kl_bits(p1, p2)).abs());
        for rule in Rule::ALL {
            let lhs = scoring_function(&rule, &b2, &b1)?;
            let rhs = entropy(&rule, &b1)? + divergence(&rule, &b1, &b2)?;
            decomposition = decomposition.max((lhs - rhs).abs());
        }
    }
    ensure!(brier <= 1e-12, "Brier closed form off by {brier:e}");
    ensure!(kl <= 1e-9, "KL off by {kl:e}");
    ensure!(decomposition <= 1e-12, "decomposition off by {decomposition:e}");
    Ok(format!("10000 pairs, errors brier {brier:.1e} kl {kl:.1e} decomposition {decomposition:.1e}"))
}

/// Standalone model of the two-state Gaussian experiment.
struct Oracle {
    mu: [f64; 2],
    sigma: f64,
    rule: Rule,
}

impl Oracle {
    fn density(&self, y: f64, x: usize) -> f64 {
        let z = (y - self.mu[x]) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn posterior(&self, p: f64, y: f64) -> f64 {
        let a = p * self.density(y, 1);
        a / (a + (1.0 - p) * self.density(y, 0))
    }

    fn shift(&self, p: f64, y: f64) -> f64 {
        let q = self.posterior(p, y);
        match self.rule {
            Rule::Brier => (q - p).powi(2),
            Rule::Ignorance => kl_bits(q, p),
        }
    }

    fn draw(&self, p: f64, rng: &mut ChaCha8Rng) -> f64 {
        let x = usize::from(rng.random::<f64>() < p);
        let z: f64 = rng.sample(StandardNormal);
        self.mu[x] + self.sigma * z
    }
}

/// Sample mean and its standard error.
fn estimate(n: usize, mut draw: impl FnMut() -> f64) -> (f64, f64) {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let v = draw();
        sum += v;
        sum_sq += v * v;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean) * nf / (nf - 1.0);
    (mean, (var / nf).sqrt())
}

fn quadrature() -> Result<String> {
    const SAMPLES: usize = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1f);
    let mut worst_z: f64 = 0.0;
    for trial in 0..20 {
        let mu0: f64 = rng.random_range(-2.0..2.0);
        let gap: f64 = rng.random_range(0.5..3.0);
        let mu1 = if rng.random::<bool>() { mu0 + gap } else { mu0 - gap };
        let sigma: f64 = rng.random_range(0.5..2.0);
        let pi: f64 = rng.random_range(0.05..0.95);
        let w: f64 = rng.random_range(0.5..0.95);
        let pa: f64 = rng.random_range(0.05..0.95);
        let pb: f64 = rng.random_range(0.05..0.95);
        let rule = if trial % 2 == 0 { Rule::Brier } else { Rule::Ignorance };

        let setup = ModelSetup::new(Experiment::gaussian_binary(mu0, mu1, sigma)?, rule);
        let model = setup.value_model();
        let exp = &setup.experiment;
        let inv = Belief::binary(pi)?;
        let community = CommunityBeliefs::binary(&[(w, pa), (1.0 - w, pb)])?;
        let quad = [
            private_value_investigator(&model, exp, &inv)?,
            public_value_investigator(&model, exp, &inv, &community)?,
            private_value_reviewers(&model, exp, &community)?,
            public_value_reviewers(&model, exp, &community)?,
        ];

        let oracle = Oracle { mu: [mu0, mu1], sigma, rule };
        let camps = [(w, pa), (1.0 - w, pb)];
        let community_shift = |y: f64| camps.iter().map(|&(wj, pj)| wj * oracle.shift(pj, y)).sum::<f64>();
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        let reviewer = |r: &mut ChaCha8Rng| if r.random::<f64>() < w { pa } else { pb };
        let mc = [
            estimate(SAMPLES, || {
                let y = oracle.draw(pi, &mut r);
                oracle.shift(pi, y)
            }),
            estimate(SAMPLES, || community_shift(oracle.draw(pi, &mut r))),
            estimate(SAMPLES, || {
                let pj = reviewer(&mut r);
                let y = oracle.draw(pj, &mut r);
                oracle.shift(pj, y)
            }),
            estimate(SAMPLES, || {
                let pj = reviewer(&mut r);
                community_shift(oracle.draw(pj, &mut r))
            }),
        ];
        for (k, (&q, &(mean, se))) in quad.iter().zip(&mc).enumerate() {
            let z = (q - mean).abs() / se;
            ensure!(
                z <= 3.0,
                "config {trial} criterion {k}: quadrature {q} vs monte carlo {mean} +- {se} ({z:.2} SE)"
            );
            worst_z = worst_z.max(z);
        }
    }
    Ok(format!("20 configs x 4 criteria, worst deviation {worst_z:.2} SE"))
}

fn default_setup() -> Result<ModelSetup> {
    RunConfig::default().model_setup()
}

fn private_landscape() -> Result<String> {
    let curve = lone_wolf_private_landscape(&default_setup()?, 101)?;
    let n = curve.len();
    let asymmetry = (0..n)
        .map(|k| (curve[k].value - curve[n - 1 - k].value).abs())
        .fold(0.0, f64::max);
    let best = curve
        .iter()
        .fold(&curve[0], |best, pt| if pt.value > best.value { pt } else { best });
    ensure!(asymmetry < 1e-9, "asymmetry {asymmetry:e}");
    ensure!((best.p - 0.5).abs() < 1e-12, "argmax at p = {}", best.p);
    Ok(format!("argmax p = {}, value {:.6}, asymmetry {asymmetry:.1e}", best.p, best.value))
}

fn public_landscape() -> Result<String> {
    let surface = lone_wolf_public_landscape(&default_setup()?, 101)?;
    let best = surface
        .iter()
        .fold(&surface[0], |best, c| if c.value > best.value { c } else { best });
    let at_one = best.p == 1.0 && best.r > 0.0 && best.r < 0.5;
    let at_zero = best.p == 0.0 && best.r > 0.5 && best.r < 1.0;
    ensure!(at_one || at_zero, "maximum at p = {}, r = {}", best.p, best.r);
    Ok(format!("maximum {:.6} at p = {}, r = {}", best.value, best.p, best.r))
}

fn theorem() -> Result<String> {
    let mut parts = Vec::new();
    for (stream, rule) in Rule::ALL.into_iter().enumerate() {
        let report = heterogeneity_theorem_check(rule, 1000, &mut substream(42, stream as u64))?;
        ensure!(report.holds(1e-6), "{rule}: {report:?}");
        parts.push(format!(
            "{rule} margins {:.2e}/{:.2e}",
            report.min_private_margin.unwrap_or(f64::NAN),
            report.min_public_margin.unwrap_or(f64::NAN)
        ));
    }
    Ok(format!("1000 trials each, {}", parts.join(", ")))
}

fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

fn simulation_patterns() -> Result<String> {
    let cfg = RunConfig::default();
    ensure!(cfg.seed == 42 && cfg.investigators == 50 && cfg.candidates == 15, "unexpected defaults");

    let private_cfg = simulation_config(&cfg, Criterion::ReviewerPrivate)?;
    let private = run_simulation(&private_cfg)?;
    let pool = candidate_pool(&private_cfg)?;
    let central = private
        .iter()
        .filter(|r| (0.35..=0.65).contains(&r.community_mean))
        .count() as f64
        / private.len() as f64;
    let chosen_sd = median(private.iter().map(|r| r.community_sd));
    let pool_sd = median(pool.iter().flatten().map(|r| r.community_sd));
    ensure!(central >= 0.8, "only {:.0}% of reviewer-private means central", 100.0 * central);
    ensure!(chosen_sd < pool_sd, "median sd {chosen_sd} not below pool median {pool_sd}");

    let public = run_simulation(&simulation_config(&cfg, Criterion::ReviewerPublic)?)?;
    let public_sd = mean(public.iter().map(|r| r.community_sd));
    let private_sd = mean(private.iter().map(|r| r.community_sd));
    ensure!(public_sd > private_sd, "reviewer-public mean sd {public_sd} <= reviewer-private {private_sd}");

    let investigator = run_simulation(&simulation_config(&cfg, Criterion::InvestigatorPublic)?)?;
    let favored = mean(investigator.iter().map(|r| r.community_mean));
    ensure!(favored < 0.5, "investigator-public mean community belief {favored}");

    Ok(format!(
        "(a) {:.0}% central, median sd {chosen_sd:.3} vs pool {pool_sd:.3}; (b) mean sd {public_sd:.3} vs {private_sd:.3}; (c) mean belief {favored:.3}",
        100.0 * central
    ))
}

fn optimal_questions() -> Result<String> {
    let setup = default_setup()?;
    let private = optimize_question(&setup, Criterion::ReviewerPrivate, 101)?;
    ensure!(
        (private.community_mean - 0.5).abs() < 1e-9 && private.community_sd < 1e-9,
        "reviewer-private optimum {private:?}"
    );
    let public = optimize_question(&setup, Criterion::ReviewerPublic, 101)?;
    let q = public.question;
    let interior = |b: f64| b > 2.0 * EPSILON && b < 1.0 - 2.0 * EPSILON;
    ensure!(
        q.majority_fraction < 1.0 - 2.0 * EPSILON
            && interior(q.majority_belief)
            && interior(q.minority_belief)
            && q.majority_belief != q.minority_belief
            && public.community_sd > 0.1,
        "reviewer-public optimum {public:?}"
    );
    Ok(format!(
        "reviewer-private mean {} sd {}; reviewer-public m {} camps {}/{} sd {:.3}",
        private.community_mean,
        private.community_sd,
        q.majority_fraction,
        q.majority_belief,
        q.minority_belief,
        public.community_sd
    ))
}

fn decision_recovery() -> Result<String> {
    const GRID: usize = 101;
    let dp = announcement_problem(&Rule::Brier, GRID)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = announcement_grid_point(rng.random_range(0..GRID), GRID);
        let q = announcement_grid_point(rng.random_range(0..GRID), GRID);
        let (prior, posterior) = (Belief::binary(p)?, Belief::binary(q)?);
        let value = instrumental_value(&dp, &posterior, &prior)?;
        let target = divergence(&Rule::Brier, &posterior, &prior)?;
        worst = worst.max((value - target).abs()).max((value - (q - p).powi(2)).abs());
    }
    ensure!(worst <= 1e-3, "max error {worst:e}");
    Ok(format!("1000 on-grid pairs, max error {worst:.1e}"))
}
