//! Exhaustive search for the best question under each criterion.
//!
//! Every criterion is a bilinear form in the community weights over the
//! lone-wolf kernel `K[i][j] = ∫ v(y, q_j) dF(y; q_i)`, so the kernel is
//! evaluated once on the belief grid and each candidate question costs a
//! handful of lookups.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::landscape::unit_grid;
use super::simulation::favored_claim;
use super::{clamp_belief, Criterion, ModelSetup, Question, EPSILON};
use crate::beliefs::{belief_stats_at, Belief, CommunityBeliefs};
use crate::error::Result;
use crate::valuation::public_value_investigator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalQuestion {
    pub question: Question,
    /// Set for [`Criterion::InvestigatorPublic`], where the investigator's
    /// camp is part of the search.
    pub investigator_belief: Option<f64>,
    pub value: f64,
    /// Community credence in the claim favored by the investigator (or by
    /// the majority camp when there is no investigator).
    pub community_mean: f64,
    pub community_sd: f64,
}

/// Grid search over `(majority_fraction, majority_belief, minority_belief)`
/// and, for the publishing criterion, the investigator's camp. Ties keep the
/// first point in lexicographic grid order, majority camp before minority.
pub fn optimize_question(setup: &ModelSetup, criterion: Criterion, grid: usize) -> Result<OptimalQuestion> {
    let axis = unit_grid(grid)?;
    let beliefs: Vec<f64> = axis.iter().map(|&q| clamp_belief(q)).collect();
    let fractions: Vec<f64> = axis.iter().map(|&u| (0.5 + 0.5 * u).min(1.0 - EPSILON)).collect();

    let model = setup.value_model();
    let kernel: Vec<f64> = (0..grid * grid)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / grid, ij % grid);
            let peers = CommunityBeliefs::binary(&[(1.0, beliefs[j])])?;
            public_value_investigator(&model, &setup.experiment, &Belief::binary(beliefs[i])?, &peers)
        })
        .collect::<Result<_>>()?;
    let k = |i: usize, j: usize| kernel[i * grid + j];

    let score = |m: f64, a: usize, b: usize, camp: usize| -> f64 {
        let n = 1.0 - m;
        match criterion {
            Criterion::ReviewerPrivate => m * k(a, a) + n * k(b, b),
            Criterion::ReviewerPublic => m * m * k(a, a) + m * n * (k(a, b) + k(b, a)) + n * n * k(b, b),
            Criterion::InvestigatorPublic => {
                let c = if camp == 0 { a } else { b };
                m * k(c, a) + n * k(c, b)
            }
        }
    };
    let camps = if criterion == Criterion::InvestigatorPublic { 2 } else { 1 };

    // Best per majority fraction in parallel, then the first overall maximum.
    let (value, mi, a, b, camp) = (0..grid)
        .into_par_iter()
        .map(|mi| {
            let m = fractions[mi];
            let mut best = (f64::NEG_INFINITY, mi, 0, 0, 0);
            for a in 0..grid {
                for b in 0..grid {
                    for camp in 0..camps {
                        let v = score(m, a, b, camp);
                        if v > best.0 {
                            best = (v, mi, a, b, camp);
                        }
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .expect("non-empty grid");

    let question = Question::new(fractions[mi], beliefs[a], beliefs[b])?;
    let investigator_belief = (criterion == Criterion::InvestigatorPublic).then(|| if camp == 0 { beliefs[a] } else { beliefs[b] });
    let favored = favored_claim(investigator_belief.unwrap_or(question.majority_belief));
    let stats = belief_stats_at(&question.community()?, favored);
    Ok(OptimalQuestion {
        question,
        investigator_belief,
        value,
        community_mean: stats.mean,
        community_sd: stats.sd,
    })
}
