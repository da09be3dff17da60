//! The four ways of valuing an experiment.
//!
//! | criterion                    | outcomes weighted by | whose belief shift counts |
//! |------------------------------|----------------------|---------------------------|
//! | [`private_value_investigator`] | investigator         | investigator              |
//! | [`public_value_investigator`]  | investigator         | community                 |
//! | [`private_value_reviewers`]    | each reviewer        | that reviewer             |
//! | [`public_value_reviewers`]     | each reviewer        | community                 |

use serde::{Deserialize, Serialize};

use crate::beliefs::{mean_belief, Belief, CommunityBeliefs};
use crate::error::{Error, Result};
use crate::experiments::{Experiment, Outcome};
use crate::scoring::{divergence, Rule};

/// How an observer values the belief shift caused by one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueModel {
    /// `v(y, P) = d(Q(P, y) || P)` under a proper scoring rule.
    Divergence { rule: Rule },
    /// Definitive experiments only: 1 when the observer gave the realized
    /// state less than even odds, 0 otherwise.
    SurpriseIndicator,
}

impl ValueModel {
    pub fn divergence(rule: Rule) -> Self {
        Self::Divergence { rule }
    }

    fn check(&self, exp: &Experiment) -> Result<()> {
        if matches!(self, Self::SurpriseIndicator) && !exp.is_definitive() {
            return Err(Error::UnsupportedCombination(
                "the surprise indicator only applies to definitive experiments".into(),
            ));
        }
        Ok(())
    }
}

fn surprise(observer: &Belief, state: usize) -> Result<f64> {
    let p = observer.prob(state);
    if p <= 0.0 {
        return Err(Error::ImpossibleEvidence);
    }
    Ok(if p < 0.5 { 1.0 } else { 0.0 })
}

fn value_at_node(model: &ValueModel, exp: &Experiment, observer: &Belief, node: usize) -> Result<f64> {
    match model {
        ValueModel::Divergence { rule } => {
            let posterior = exp.posterior_at_node(observer, node)?;
            divergence(rule, &posterior, observer)
        }
        ValueModel::SurpriseIndicator => match exp.support_outcome(node) {
            Outcome::Index(state) => surprise(observer, state),
            Outcome::Real(_) => Err(Error::OutcomeDomain),
        },
    }
}

fn community_value_at_node(
    model: &ValueModel,
    exp: &Experiment,
    community: &CommunityBeliefs,
    node: usize,
) -> Result<f64> {
    community.members().iter().try_fold(0.0, |acc, m| {
        Ok(acc + m.weight * value_at_node(model, exp, &m.belief, node)?)
    })
}

fn check_community(exp: &Experiment, community: &CommunityBeliefs) -> Result<()> {
    if community.n_states() != exp.n_states() {
        return Err(Error::DimensionMismatch {
            expected: exp.n_states(),
            found: community.n_states(),
        });
    }
    Ok(())
}

/// `v(y, P)`: value of outcome `y` to an observer holding `observer`.
pub fn outcome_value(model: &ValueModel, exp: &Experiment, observer: &Belief, y: Outcome) -> Result<f64> {
    model.check(exp)?;
    observer.ensure_len(exp.n_states())?;
    match model {
        ValueModel::Divergence { rule } => {
            let posterior = exp.posterior(observer, y)?;
            divergence(rule, &posterior, observer)
        }
        ValueModel::SurpriseIndicator => match y {
            Outcome::Index(state) if state < exp.n_states() => surprise(observer, state),
            _ => Err(Error::OutcomeDomain),
        },
    }
}

/// `v(y)`: the community-average value of outcome `y`.
pub fn community_outcome_value(
    model: &ValueModel,
    exp: &Experiment,
    community: &CommunityBeliefs,
    y: Outcome,
) -> Result<f64> {
    check_community(exp, community)?;
    community.members().iter().try_fold(0.0, |acc, m| {
        Ok(acc + m.weight * outcome_value(model, exp, &m.belief, y)?)
    })
}

/// Expected shift in the investigator's own beliefs.
pub fn private_value_investigator(model: &ValueModel, exp: &Experiment, investigator: &Belief) -> Result<f64> {
    model.check(exp)?;
    exp.integrate_nodes(investigator, |node| value_at_node(model, exp, investigator, node))
}

/// Expected shift in the community's beliefs, with outcomes weighted by the
/// investigator's own belief.
pub fn public_value_investigator(
    model: &ValueModel,
    exp: &Experiment,
    investigator: &Belief,
    community: &CommunityBeliefs,
) -> Result<f64> {
    model.check(exp)?;
    check_community(exp, community)?;
    exp.integrate_nodes(investigator, |node| community_value_at_node(model, exp, community, node))
}

/// Average over reviewers of each reviewer's expected private shift.
pub fn private_value_reviewers(model: &ValueModel, exp: &Experiment, community: &CommunityBeliefs) -> Result<f64> {
    check_community(exp, community)?;
    community.members().iter().try_fold(0.0, |acc, m| {
        Ok(acc + m.weight * private_value_investigator(model, exp, &m.belief)?)
    })
}

/// Average over reviewers of the expected community shift, evaluated as
/// `∫ v(y) dF(y)` with the community-averaged predictive.
pub fn public_value_reviewers(model: &ValueModel, exp: &Experiment, community: &CommunityBeliefs) -> Result<f64> {
    model.check(exp)?;
    check_community(exp, community)?;
    let average = mean_belief(community);
    exp.integrate_nodes(&average, |node| community_value_at_node(model, exp, community, node))
}

/// [`public_value_reviewers`] evaluated as the nested average
/// `Σ_j w_j ∫ v(y) dF(y; P_j)`.
pub fn public_value_reviewers_nested(
    model: &ValueModel,
    exp: &Experiment,
    community: &CommunityBeliefs,
) -> Result<f64> {
    community.members().iter().try_fold(0.0, |acc, m| {
        Ok(acc + m.weight * public_value_investigator(model, exp, &m.belief, community)?)
    })
}
