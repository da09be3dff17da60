//! State spaces, beliefs and finite communities of beliefs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the probability-sum invariant of a stored [`Belief`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Inputs whose mass is within this distance of one are renormalized;
/// anything further off is rejected.
pub const NORMALIZE_TOLERANCE: f64 = 1e-9;

/// An ordered set of mutually exclusive states of nature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::InvalidStateSpace(format!(
                "need at least 2 states, got {}",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidStateSpace(format!("duplicate label `{label}`")));
            }
        }
        Ok(Self { labels })
    }

    /// The two-claim space `{"0", "1"}` used throughout the binary examples.
    pub fn binary() -> Self {
        Self {
            labels: vec!["0".to_owned(), "1".to_owned()],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState(label.to_owned()))
    }
}

/// A probability distribution over the states of a [`StateSpace`].
///
/// States are addressed by index; the owning space supplies labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Belief {
    probs: Vec<f64>,
}

impl Belief {
    /// Builds a belief from raw probabilities, renormalizing small drift.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidBelief(format!(
                "need at least 2 states, got {}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0) {
            return Err(Error::InvalidBelief(format!("probability {bad} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZE_TOLERANCE {
            return Err(Error::InvalidBelief(format!("probabilities sum to {total}")));
        }
        let probs = if (total - 1.0).abs() > SUM_TOLERANCE {
            probs.into_iter().map(|p| p / total).collect()
        } else {
            probs
        };
        Ok(Self { probs })
    }

    /// Binary belief with `p = Pr[X = 1]`.
    pub fn binary(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidBelief(format!("probability {p} outside [0, 1]")));
        }
        Ok(Self {
            probs: vec![1.0 - p, p],
        })
    }

    /// Point mass on `state`.
    pub fn point_mass(n_states: usize, state: usize) -> Result<Self> {
        if state >= n_states {
            return Err(Error::StateOutOfRange {
                index: state,
                len: n_states,
            });
        }
        let mut probs = vec![0.0; n_states];
        probs[state] = 1.0;
        Self::new(probs)
    }

    /// Uniform belief over `n_states` states.
    pub fn uniform(n_states: usize) -> Result<Self> {
        Self::new(vec![1.0 / n_states as f64; n_states])
    }

    /// Normalizes arbitrary non-negative weights into a belief.
    pub(crate) fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::ImpossibleEvidence);
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, state: usize) -> f64 {
        self.probs[state]
    }

    /// `Pr[X = 1]` of a binary belief.
    pub fn p(&self) -> f64 {
        self.probs[1]
    }

    pub fn is_binary(&self) -> bool {
        self.probs.len() == 2
    }

    /// Pointwise mixture `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Belief, lambda: f64) -> Result<Self> {
        self.ensure_same_len(other)?;
        Self::new(
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (lambda * a + (1.0 - lambda) * b).clamp(0.0, 1.0))
                .collect(),
        )
    }

    pub(crate) fn ensure_same_len(&self, other: &Belief) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// One weighted camp of a community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub weight: f64,
    pub belief: Belief,
}

/// A finite mixture of beliefs held across a community of peers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityBeliefs {
    space: StateSpace,
    members: Vec<Member>,
}

impl CommunityBeliefs {
    pub fn new(space: StateSpace, members: Vec<(f64, Belief)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidCommunity("no members".into()));
        }
        let mut total = 0.0;
        for (w, b) in &members {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidCommunity(format!("non-positive weight {w}")));
            }
            b.ensure_len(space.len())?;
            total += w;
        }
        if (total - 1.0).abs() > NORMALIZE_TOLERANCE {
            return Err(Error::InvalidCommunity(format!("weights sum to {total}")));
        }
        let members = members
            .into_iter()
            .map(|(weight, belief)| Member {
                weight: weight / total,
                belief,
            })
            .collect();
        Ok(Self { space, members })
    }

    /// Binary community from `(weight, Pr[X = 1])` pairs.
    pub fn binary(camps: &[(f64, f64)]) -> Result<Self> {
        let members = camps
            .iter()
            .map(|&(w, p)| Belief::binary(p).map(|b| (w, b)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(StateSpace::binary(), members)
    }

    /// A community in which everyone holds `belief`.
    pub fn homogeneous(space: StateSpace, belief: Belief) -> Result<Self> {
        Self::new(space, vec![(1.0, belief)])
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn n_states(&self) -> usize {
        self.space.len()
    }
}

/// Weight-averaged belief of the community.
pub fn mean_belief(community: &CommunityBeliefs) -> Belief {
    let mut probs = vec![0.0; community.n_states()];
    for m in community.members() {
        for (acc, p) in probs.iter_mut().zip(m.belief.probs()) {
            *acc += m.weight * p;
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p = (*p / total).clamp(0.0, 1.0);
    }
    Belief { probs }
}

/// Mean and standard deviation of the community's credence in one claim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefStats {
    pub mean: f64,
    pub sd: f64,
}

pub fn belief_stats(community: &CommunityBeliefs, claim: &str) -> Result<BeliefStats> {
    let idx = community.space().index_of(claim)?;
    Ok(belief_stats_at(community, idx))
}

pub(crate) fn belief_stats_at(community: &CommunityBeliefs, state: usize) -> BeliefStats {
    let mean: f64 = community
        .members()
        .iter()
        .map(|mem| mem.weight * mem.belief.prob(state))
        .sum();
    // Centered form; E[p^2] - mean^2 can dip below zero in floating point.
    let variance: f64 = community
        .members()
        .iter()
        .map(|mem| mem.weight * (mem.belief.prob(state) - mean).powi(2))
        .sum();
    BeliefStats {
        mean,
        sd: variance.sqrt(),
    }
}
