//! Decision-theoretic valuation of experiments under *ex ante* (proposal)
//! and *ex post* (outcome) peer review.
//!
//! Observers hold beliefs over competing claims, update them by Bayes' rule
//! after seeing an experiment's outcome, and value the outcome by how far it
//! moves a belief, priced with a strictly proper scoring rule. Who weights
//! the outcomes and whose beliefs move gives four different valuations of
//! the same experiment; see [`valuation`].

pub mod beliefs;
pub mod decision;
pub mod error;
pub mod experiments;
pub mod rng;
pub mod scenarios;
pub mod scoring;
pub mod valuation;

pub use beliefs::{belief_stats, mean_belief, Belief, BeliefStats, CommunityBeliefs, StateSpace};
pub use decision::DecisionProblem;
pub use error::{Error, Result};
pub use experiments::{Experiment, ExperimentKind, Outcome, OutcomeDistribution};
pub use scenarios::{Criterion, ModelSetup, Question};
pub use scoring::{divergence, entropy, score, scoring_function, Rule, ScoringRule};
pub use valuation::ValueModel;
