//! Instrumental value of information in finite decision problems.
//!
//! A decision problem is a finite action set with a utility per
//! (action, state). Optimal actions break ties towards the lowest action
//! index so that `a*(P)` is a function.

use serde::{Deserialize, Serialize};

use crate::beliefs::{Belief, StateSpace};
use crate::error::{Error, Result};
use crate::scoring::ScoringRule;

/// Clamp applied to announcement actions whose score would be infinite.
pub const ANNOUNCEMENT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    actions: Vec<String>,
    /// `utility[a][x]`.
    utility: Vec<Vec<f64>>,
}

impl DecisionProblem {
    pub fn new(actions: Vec<String>, utility: Vec<Vec<f64>>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidDecisionProblem("no actions".into()));
        }
        if utility.len() != actions.len() {
            return Err(Error::InvalidDecisionProblem(format!(
                "{} actions but {} utility rows",
                actions.len(),
                utility.len()
            )));
        }
        let n_states = utility[0].len();
        if n_states < 2 {
            return Err(Error::InvalidDecisionProblem("need at least 2 states".into()));
        }
        for row in &utility {
            if row.len() != n_states {
                return Err(Error::InvalidDecisionProblem("ragged utility matrix".into()));
            }
            if row.iter().any(|u| !u.is_finite()) {
                return Err(Error::InvalidDecisionProblem("non-finite utility".into()));
            }
        }
        Ok(Self { actions, utility })
    }

    /// Guess-the-state problem: utility 1 for naming the true state.
    pub fn matching(space: &StateSpace) -> Self {
        let n = space.len();
        Self {
            actions: space.labels().to_vec(),
            utility: (0..n)
                .map(|a| (0..n).map(|x| if a == x { 1.0 } else { 0.0 }).collect())
                .collect(),
        }
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn utility(&self, action: usize, state: usize) -> f64 {
        self.utility[action][state]
    }

    pub fn n_states(&self) -> usize {
        self.utility[0].len()
    }

    fn check(&self, belief: &Belief) -> Result<()> {
        belief.ensure_len(self.n_states())
    }

    /// Expected utility of `action` under `belief`.
    pub fn expected_utility(&self, action: usize, belief: &Belief) -> f64 {
        self.utility[action]
            .iter()
            .zip(belief.probs())
            .map(|(u, p)| u * p)
            .sum()
    }

    /// Best achievable expected utility under `belief`.
    pub fn best_expected_utility(&self, belief: &Belief) -> Result<f64> {
        let a = optimal_action(self, belief)?;
        Ok(self.expected_utility(a, belief))
    }

    fn best_for_state(&self, state: usize) -> f64 {
        // a*(δ_x) maximizes u(., x); ties do not change the value.
        self.utility
            .iter()
            .map(|row| row[state])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Index of the utility-maximizing action.
pub fn optimal_action(dp: &DecisionProblem, belief: &Belief) -> Result<usize> {
    dp.check(belief)?;
    let mut best = 0;
    let mut best_value = dp.expected_utility(0, belief);
    for a in 1..dp.actions.len() {
        let v = dp.expected_utility(a, belief);
        if v > best_value {
            best = a;
            best_value = v;
        }
    }
    Ok(best)
}

/// `V(Q, P)`: expected gain, judged by `posterior`, from acting on
/// `posterior` rather than `prior`.
pub fn instrumental_value(dp: &DecisionProblem, posterior: &Belief, prior: &Belief) -> Result<f64> {
    let a_post = optimal_action(dp, posterior)?;
    let a_prior = optimal_action(dp, prior)?;
    Ok(posterior
        .probs()
        .iter()
        .enumerate()
        .map(|(x, q)| q * (dp.utility(a_post, x) - dp.utility(a_prior, x)))
        .sum())
}

/// `c(P)`: expected utility lost by acting under uncertainty instead of
/// knowing the state.
pub fn uncertainty(dp: &DecisionProblem, belief: &Belief) -> Result<f64> {
    generalized_scoring(dp, belief, belief)
}

/// `C(R, P)`: expected loss, against full information, of acting on `issued`
/// when states follow `actual`.
pub fn generalized_scoring(dp: &DecisionProblem, issued: &Belief, actual: &Belief) -> Result<f64> {
    dp.check(actual)?;
    let a = optimal_action(dp, issued)?;
    Ok(actual
        .probs()
        .iter()
        .enumerate()
        .map(|(x, p)| p * (dp.best_for_state(x) - dp.utility(a, x)))
        .sum())
}

/// Grid point `k` of an announcement grid with `grid_size` points.
pub fn announcement_grid_point(k: usize, grid_size: usize) -> f64 {
    k as f64 / (grid_size - 1) as f64
}

/// Binary announcement problem: the action is a reported belief `a` on a
/// uniform grid over `[0, 1]` and `u(a, x) = S(δ_x, x) - S(a, x)`.
///
/// Grid endpoints whose score is infinite under `rule` are pulled in to
/// `ε` / `1 - ε`.
pub fn announcement_problem<R: ScoringRule + ?Sized>(rule: &R, grid_size: usize) -> Result<DecisionProblem> {
    if grid_size < 3 {
        return Err(Error::InvalidArgument(format!("announcement grid needs >= 3 points, got {grid_size}")));
    }
    let mut actions = Vec::with_capacity(grid_size);
    let mut utility = Vec::with_capacity(grid_size);
    let certain = [Belief::binary(0.0)?, Belief::binary(1.0)?];
    for k in 0..grid_size {
        let mut a = announcement_grid_point(k, grid_size);
        let row = match announcement_row(rule, &certain, a) {
            Ok(row) => row,
            Err(Error::InfiniteScore { .. }) => {
                a = a.clamp(ANNOUNCEMENT_EPSILON, 1.0 - ANNOUNCEMENT_EPSILON);
                announcement_row(rule, &certain, a)?
            }
            Err(e) => return Err(e),
        };
        actions.push(format!("{a}"));
        utility.push(row);
    }
    DecisionProblem::new(actions, utility)
}

fn announcement_row<R: ScoringRule + ?Sized>(rule: &R, certain: &[Belief; 2], a: f64) -> Result<Vec<f64>> {
    let announced = Belief::binary(a)?;
    (0..2)
        .map(|x| Ok(rule.score(&certain[x], x)? - rule.score(&announced, x)?))
        .collect()
}
