//! Experiment likelihood models, predictive distributions and Bayesian
//! updating.
//!
//! Every experiment carries a fixed table of support points. For discrete
//! outcomes these are the outcomes themselves with unit weight; for the
//! Gaussian experiment they are composite-Simpson nodes on
//! `[min(mu) - 8 sigma, max(mu) + 8 sigma]`. All expectations over outcomes
//! in the crate go through this one table.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::beliefs::{mean_belief, Belief, CommunityBeliefs};
use crate::error::{Error, Result};

/// Number of Simpson nodes for continuous outcomes (odd).
pub const QUADRATURE_NODES: usize = 4001;

/// Half-width of the integration window beyond the outer means, in units of
/// `sigma_y`.
pub const QUADRATURE_HALF_WIDTH: f64 = 8.0;

const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// A single experimental outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Real(f64),
    Index(usize),
}

/// The likelihood family `F(y | x)` shared by every observer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExperimentKind {
    /// `Y | X = j ~ Normal(mu_j, sigma_y)` on a binary state space.
    GaussianBinary { mu0: f64, mu1: f64, sigma_y: f64 },
    /// `Y = X`.
    Definitive { n_states: usize },
    /// Row-stochastic table, rows are states and columns outcomes.
    FiniteOutcome { table: Vec<Vec<f64>> },
}

#[derive(Debug)]
struct Support {
    outcomes: Vec<Outcome>,
    weights: Vec<f64>,
    /// Row-major `[node][state]`.
    lik: Vec<f64>,
    log_lik: Vec<f64>,
}

/// An experiment together with its precomputed outcome support.
#[derive(Debug, Clone)]
pub struct Experiment {
    kind: ExperimentKind,
    n_states: usize,
    support: Arc<Support>,
}

impl PartialEq for Experiment {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Default for Experiment {
    /// `GaussianBinary(0, 2, 1)`.
    fn default() -> Self {
        Self::gaussian_binary(0.0, 2.0, 1.0).expect("default parameters are valid")
    }
}

fn gaussian_log_density(y: f64, mu: f64, sigma: f64) -> f64 {
    let z = (y - mu) / sigma;
    -0.5 * z * z - (sigma * (2.0 * PI).sqrt()).ln()
}

/// Composite Simpson nodes and weights on `[lo, hi]`.
pub fn simpson_rule(lo: f64, hi: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson needs an odd node count >= 3");
    let intervals = nodes - 1;
    let h = (hi - lo) / intervals as f64;
    let xs = (0..nodes).map(|k| lo + k as f64 * h).collect();
    let ws = (0..nodes)
        .map(|k| {
            let c = if k == 0 || k == intervals {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (xs, ws)
}

impl Experiment {
    pub fn gaussian_binary(mu0: f64, mu1: f64, sigma_y: f64) -> Result<Self> {
        if !(mu0.is_finite() && mu1.is_finite()) || mu0 == mu1 {
            return Err(Error::InvalidExperiment(format!(
                "means must be finite and distinct, got {mu0} and {mu1}"
            )));
        }
        if !(sigma_y.is_finite() && sigma_y > 0.0) {
            return Err(Error::InvalidExperiment(format!("sigma_y must be positive, got {sigma_y}")));
        }
        let lo = mu0.min(mu1) - QUADRATURE_HALF_WIDTH * sigma_y;
        let hi = mu0.max(mu1) + QUADRATURE_HALF_WIDTH * sigma_y;
        let (ys, weights) = simpson_rule(lo, hi, QUADRATURE_NODES);
        let mut lik = Vec::with_capacity(2 * ys.len());
        let mut log_lik = Vec::with_capacity(2 * ys.len());
        for &y in &ys {
            for mu in [mu0, mu1] {
                let l = gaussian_log_density(y, mu, sigma_y);
                log_lik.push(l);
                lik.push(l.exp());
            }
        }
        Ok(Self {
            kind: ExperimentKind::GaussianBinary { mu0, mu1, sigma_y },
            n_states: 2,
            support: Arc::new(Support {
                outcomes: ys.into_iter().map(Outcome::Real).collect(),
                weights,
                lik,
                log_lik,
            }),
        })
    }

    /// Gaussian experiment with `sigma_y = |mu0 - mu1| / 2`.
    pub fn gaussian_binary_half_gap(mu0: f64, mu1: f64) -> Result<Self> {
        Self::gaussian_binary(mu0, mu1, (mu0 - mu1).abs() / 2.0)
    }

    pub fn definitive(n_states: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::InvalidExperiment("need at least 2 states".into()));
        }
        let table: Vec<Vec<f64>> = (0..n_states)
            .map(|i| (0..n_states).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut exp = Self::from_table(&table)?;
        exp.kind = ExperimentKind::Definitive { n_states };
        Ok(exp)
    }

    pub fn finite_outcome(table: Vec<Vec<f64>>) -> Result<Self> {
        let mut exp = Self::from_table(&table)?;
        exp.kind = ExperimentKind::FiniteOutcome { table };
        Ok(exp)
    }

    fn from_table(table: &[Vec<f64>]) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidExperiment("need at least 2 state rows".into()));
        }
        let n_out = table[0].len();
        if n_out == 0 {
            return Err(Error::InvalidExperiment("need at least 1 outcome".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n_out {
                return Err(Error::InvalidExperiment(format!("row {i} has {} columns, expected {n_out}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidExperiment(format!("row {i} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidExperiment(format!("row {i} sums to {s}")));
            }
        }
        let n_states = table.len();
        let mut lik = Vec::with_capacity(n_out * n_states);
        for k in 0..n_out {
            for row in table {
                lik.push(row[k]);
            }
        }
        let log_lik = lik.iter().map(|l| l.ln()).collect();
        Ok(Self {
            kind: ExperimentKind::FiniteOutcome { table: table.to_vec() },
            n_states,
            support: Arc::new(Support {
                outcomes: (0..n_out).map(Outcome::Index).collect(),
                weights: vec![1.0; n_out],
                lik,
                log_lik,
            }),
        })
    }

    pub fn kind(&self) -> &ExperimentKind {
        &self.kind
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn is_definitive(&self) -> bool {
        matches!(self.kind, ExperimentKind::Definitive { .. })
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, ExperimentKind::GaussianBinary { .. })
    }

    /// Number of support points (quadrature nodes or discrete outcomes).
    pub fn support_len(&self) -> usize {
        self.support.outcomes.len()
    }

    pub fn support_outcome(&self, node: usize) -> Outcome {
        self.support.outcomes[node]
    }

    fn check_state(&self, x: usize) -> Result<()> {
        if x >= self.n_states {
            return Err(Error::StateOutOfRange {
                index: x,
                len: self.n_states,
            });
        }
        Ok(())
    }

    fn discrete_index(&self, y: Outcome) -> Result<usize> {
        match (y, self.is_continuous()) {
            (Outcome::Index(k), false) if k < self.support_len() => Ok(k),
            _ => Err(Error::OutcomeDomain),
        }
    }

    fn log_likelihoods(&self, y: Outcome) -> Result<Vec<f64>> {
        match (&self.kind, y) {
            (ExperimentKind::GaussianBinary { mu0, mu1, sigma_y }, Outcome::Real(v)) if v.is_finite() => {
                Ok(vec![
                    gaussian_log_density(v, *mu0, *sigma_y),
                    gaussian_log_density(v, *mu1, *sigma_y),
                ])
            }
            (ExperimentKind::GaussianBinary { .. }, _) => Err(Error::OutcomeDomain),
            _ => {
                let k = self.discrete_index(y)?;
                Ok(self.node_log_lik(k).to_vec())
            }
        }
    }

    fn node_lik(&self, node: usize) -> &[f64] {
        &self.support.lik[node * self.n_states..(node + 1) * self.n_states]
    }

    fn node_log_lik(&self, node: usize) -> &[f64] {
        &self.support.log_lik[node * self.n_states..(node + 1) * self.n_states]
    }

    /// Density (continuous) or mass (discrete) of outcome `y` in state `x`.
    pub fn likelihood(&self, y: Outcome, x: usize) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.log_likelihoods(y)?[x].exp())
    }

    /// Bayesian posterior `Q(P, y)`.
    pub fn posterior(&self, prior: &Belief, y: Outcome) -> Result<Belief> {
        prior.ensure_len(self.n_states)?;
        let log_lik = self.log_likelihoods(y)?;
        posterior_from_log_lik(prior, &log_lik)
    }

    /// Posterior at a support point, reusing the cached likelihoods.
    pub(crate) fn posterior_at_node(&self, prior: &Belief, node: usize) -> Result<Belief> {
        posterior_from_log_lik(prior, self.node_log_lik(node))
    }

    /// Predictive weight `w_k * f(y_k; P)` of a support point.
    pub(crate) fn node_mass(&self, weighting: &Belief, node: usize) -> f64 {
        let lik = self.node_lik(node);
        self.support.weights[node]
            * weighting.probs().iter().zip(lik).map(|(p, l)| p * l).sum::<f64>()
    }

    /// `∫ g(y) dF(y; P)` over the support table. The integrand receives the
    /// support-point index and is never called where `F(.; P)` has no mass.
    pub(crate) fn integrate_nodes<G>(&self, weighting: &Belief, mut g: G) -> Result<f64>
    where
        G: FnMut(usize) -> Result<f64>,
    {
        weighting.ensure_len(self.n_states)?;
        let mut total = 0.0;
        for node in 0..self.support_len() {
            let mass = self.node_mass(weighting, node);
            if mass > 0.0 {
                total += mass * g(node)?;
            }
        }
        Ok(total)
    }

    /// `∫ g(y) dF(y; P)` for an arbitrary integrand.
    pub fn integrate<G>(&self, weighting: &Belief, mut g: G) -> Result<f64>
    where
        G: FnMut(Outcome) -> Result<f64>,
    {
        self.integrate_nodes(weighting, |node| g(self.support_outcome(node)))
    }

    /// Outcome distribution `F(y; P)` anticipated by someone believing `prior`.
    pub fn predictive(&self, prior: &Belief) -> Result<OutcomeDistribution> {
        prior.ensure_len(self.n_states)?;
        Ok(match &self.kind {
            ExperimentKind::GaussianBinary { mu0, mu1, sigma_y } => OutcomeDistribution::GaussianMixture {
                components: vec![(prior.prob(0), *mu0), (prior.prob(1), *mu1)],
                sd: *sigma_y,
            },
            _ => OutcomeDistribution::Discrete(
                (0..self.support_len())
                    .map(|k| self.node_mass(prior, k))
                    .collect(),
            ),
        })
    }

    /// Community-averaged outcome distribution `F(y)`.
    pub fn community_predictive(&self, community: &CommunityBeliefs) -> Result<OutcomeDistribution> {
        self.predictive(&mean_belief(community))
    }

    /// Total mass of `dist` under this experiment's support table.
    pub fn support_mass(&self, dist: &OutcomeDistribution) -> f64 {
        (0..self.support_len())
            .map(|k| {
                let y = self.support_outcome(k);
                self.support.weights[k] * dist.density(y).unwrap_or(0.0)
            })
            .sum()
    }
}

fn posterior_from_log_lik(prior: &Belief, log_lik: &[f64]) -> Result<Belief> {
    let shift = prior
        .probs()
        .iter()
        .zip(log_lik)
        .filter(|(p, _)| **p > 0.0)
        .map(|(_, l)| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Err(Error::ImpossibleEvidence);
    }
    let weights = prior
        .probs()
        .iter()
        .zip(log_lik)
        .map(|(p, l)| if *p > 0.0 { p * (l - shift).exp() } else { 0.0 })
        .collect();
    Belief::from_weights(weights)
}

/// A predictive distribution over outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutcomeDistribution {
    /// Probability mass per outcome index.
    Discrete(Vec<f64>),
    /// Mixture of equal-variance normals, `(weight, mean)` per component.
    GaussianMixture { components: Vec<(f64, f64)>, sd: f64 },
}

impl OutcomeDistribution {
    /// Density or mass at `y`.
    pub fn density(&self, y: Outcome) -> Result<f64> {
        match (self, y) {
            (Self::Discrete(masses), Outcome::Index(k)) => {
                masses.get(k).copied().ok_or(Error::OutcomeDomain)
            }
            (Self::GaussianMixture { components, sd }, Outcome::Real(v)) => Ok(components
                .iter()
                .map(|(w, mu)| w * gaussian_log_density(v, *mu, *sd).exp())
                .sum()),
            _ => Err(Error::OutcomeDomain),
        }
    }
}
