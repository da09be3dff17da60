//! Community simulation: each investigator samples a handful of questions
//! from a common pool and pursues the one that scores best under a
//! criterion.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{criterion_value, Criterion, ModelSetup, Question};
use crate::beliefs::belief_stats_at;
use crate::error::{Error, Result};
use crate::rng::substream;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_investigators: usize,
    pub n_candidates: usize,
    pub criterion: Criterion,
    pub setup: ModelSetup,
    pub seed: u64,
}

impl SimulationConfig {
    pub const DEFAULT_INVESTIGATORS: usize = 50;
    pub const DEFAULT_CANDIDATES: usize = 15;

    /// 50 investigators choosing among 15 candidates each, default model.
    pub fn new(criterion: Criterion, seed: u64) -> Self {
        Self {
            n_investigators: Self::DEFAULT_INVESTIGATORS,
            n_candidates: Self::DEFAULT_CANDIDATES,
            criterion,
            setup: ModelSetup::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_investigators == 0 || self.n_candidates == 0 {
            return Err(Error::InvalidArgument(
                "investigator and candidate counts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One scored question, seen from the investigator who drew it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChoiceRecord {
    pub question: Question,
    /// The investigator's `Pr[X = 1]`.
    pub investigator_belief: f64,
    /// The claim the investigator leans towards (1 on an even split).
    pub favored_claim: usize,
    /// Community credence in the favored claim.
    pub community_mean: f64,
    pub community_sd: f64,
    pub criterion_value: f64,
}

pub fn sample_question<R: Rng + ?Sized>(rng: &mut R) -> Question {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let u3: f64 = rng.random();
    Question::from_uniforms(u1, u2, u3)
}

impl Question {
    /// Camp belief for an investigator drawn with uniform `u`: majority when
    /// `u < majority_fraction`.
    pub fn camp_belief_for(&self, u: f64) -> f64 {
        if u < self.majority_fraction {
            self.majority_belief
        } else {
            self.minority_belief
        }
    }
}

pub fn assign_investigator_belief<R: Rng + ?Sized>(question: &Question, rng: &mut R) -> f64 {
    question.camp_belief_for(rng.random())
}

pub fn favored_claim(investigator_belief: f64) -> usize {
    usize::from(investigator_belief >= 0.5)
}

pub(crate) fn record(
    setup: &ModelSetup,
    criterion: Criterion,
    question: Question,
    investigator_belief: f64,
) -> Result<ChoiceRecord> {
    let favored = favored_claim(investigator_belief);
    let stats = belief_stats_at(&question.community()?, favored);
    Ok(ChoiceRecord {
        question,
        investigator_belief,
        favored_claim: favored,
        community_mean: stats.mean,
        community_sd: stats.sd,
        criterion_value: criterion_value(setup, criterion, &question, investigator_belief)?,
    })
}

fn investigator_candidates(cfg: &SimulationConfig, investigator: usize) -> Result<Vec<ChoiceRecord>> {
    let mut rng = substream(cfg.seed, investigator as u64);
    (0..cfg.n_candidates)
        .map(|_| {
            let question = sample_question(&mut rng);
            let belief = assign_investigator_belief(&question, &mut rng);
            record(&cfg.setup, cfg.criterion, question, belief)
        })
        .collect()
}

/// Every candidate drawn by every investigator, in investigator order.
/// The draws do not depend on the criterion.
pub fn candidate_pool(cfg: &SimulationConfig) -> Result<Vec<Vec<ChoiceRecord>>> {
    cfg.validate()?;
    (0..cfg.n_investigators)
        .into_par_iter()
        .map(|i| investigator_candidates(cfg, i))
        .collect()
}

/// The question each investigator pursues; ties go to the earliest draw.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<Vec<ChoiceRecord>> {
    Ok(candidate_pool(cfg)?
        .into_iter()
        .map(|candidates| {
            candidates
                .into_iter()
                .reduce(|best, c| if c.criterion_value > best.criterion_value { c } else { best })
                .expect("at least one candidate")
        })
        .collect())
}
