//! Worked examples, landscapes and the community simulation.

mod landscape;
mod mars;
mod optimize;
mod simulation;
mod theorem;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::beliefs::{Belief, CommunityBeliefs};
use crate::error::{Error, Result};
use crate::experiments::Experiment;
use crate::scoring::Rule;
use crate::valuation::{
    private_value_reviewers, public_value_investigator, public_value_reviewers, ValueModel,
};

pub use landscape::{lone_wolf_private_landscape, lone_wolf_public_landscape, LandscapeCell, LandscapePoint};
pub use mars::{mars_scenario, MarsValues, MARS_EPSILON};
pub use optimize::{optimize_question, OptimalQuestion};
pub use simulation::{
    assign_investigator_belief, candidate_pool, favored_claim, run_simulation, sample_question, ChoiceRecord,
    SimulationConfig,
};
pub use theorem::{heterogeneity_theorem_check, TheoremReport, THEOREM_MAX_MAJORITY, THEOREM_MIN_SEPARATION};

/// Stand-in for beliefs held "almost beyond doubt".
pub const EPSILON: f64 = 1e-9;

pub(crate) fn clamp_belief(p: f64) -> f64 {
    p.clamp(EPSILON, 1.0 - EPSILON)
}

/// Experiment and scoring rule shared by a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSetup {
    pub experiment: Experiment,
    pub rule: Rule,
}

impl Default for ModelSetup {
    /// `GaussianBinary(0, 2, 1)` scored with Brier.
    fn default() -> Self {
        Self {
            experiment: Experiment::default(),
            rule: Rule::Brier,
        }
    }
}

impl ModelSetup {
    pub fn new(experiment: Experiment, rule: Rule) -> Self {
        Self { experiment, rule }
    }

    pub fn value_model(&self) -> ValueModel {
        ValueModel::divergence(self.rule)
    }
}

/// The criterion an investigator uses to pick among candidate questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Publishing: the investigator's own odds, the community's belief shift.
    InvestigatorPublic,
    /// Grant review where reviewers value their private learning.
    ReviewerPrivate,
    /// Grant review where reviewers value the community's learning.
    ReviewerPublic,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::InvestigatorPublic,
        Criterion::ReviewerPrivate,
        Criterion::ReviewerPublic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::InvestigatorPublic => "investigator-public",
            Criterion::ReviewerPrivate => "reviewer-private",
            Criterion::ReviewerPublic => "reviewer-public",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion `{s}`")))
    }
}

/// A binary question, described by how the community splits over it.
///
/// Camp beliefs are `Pr[X = 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub majority_fraction: f64,
    pub majority_belief: f64,
    pub minority_belief: f64,
}

impl Question {
    pub fn new(majority_fraction: f64, majority_belief: f64, minority_belief: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&majority_fraction) {
            return Err(Error::InvalidArgument(format!(
                "majority fraction {majority_fraction} outside [0.5, 1]"
            )));
        }
        for p in [majority_belief, minority_belief] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("camp belief {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            majority_fraction,
            majority_belief,
            minority_belief,
        })
    }

    /// Maps three uniform draws on `[0, 1)` to a question.
    pub fn from_uniforms(u1: f64, u2: f64, u3: f64) -> Self {
        Self {
            majority_fraction: 0.5 + 0.5 * u1,
            majority_belief: u2,
            minority_belief: u3,
        }
    }

    fn community_with(&self, map: impl Fn(f64) -> f64) -> Result<CommunityBeliefs> {
        let m = self.majority_fraction;
        if m >= 1.0 {
            CommunityBeliefs::binary(&[(1.0, map(self.majority_belief))])
        } else {
            CommunityBeliefs::binary(&[(m, map(self.majority_belief)), (1.0 - m, map(self.minority_belief))])
        }
    }

    /// The two-camp community (a single camp when the majority is everyone).
    pub fn community(&self) -> Result<CommunityBeliefs> {
        self.community_with(|p| p)
    }

    /// As [`Question::community`] with beliefs kept off the boundary.
    pub(crate) fn clamped_community(&self) -> Result<CommunityBeliefs> {
        self.community_with(clamp_belief)
    }
}

/// Score of `question` under `criterion`. `investigator_belief` (`Pr[X = 1]`)
/// only matters for [`Criterion::InvestigatorPublic`].
pub fn criterion_value(
    setup: &ModelSetup,
    criterion: Criterion,
    question: &Question,
    investigator_belief: f64,
) -> Result<f64> {
    let model = setup.value_model();
    let exp = &setup.experiment;
    let community = question.clamped_community()?;
    match criterion {
        Criterion::InvestigatorPublic => {
            let investigator = Belief::binary(clamp_belief(investigator_belief))?;
            public_value_investigator(&model, exp, &investigator, &community)
        }
        Criterion::ReviewerPrivate => private_value_reviewers(&model, exp, &community),
        Criterion::ReviewerPublic => public_value_reviewers(&model, exp, &community),
    }
}
