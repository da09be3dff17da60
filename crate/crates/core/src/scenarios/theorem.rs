//! Numerical check that belief heterogeneity lowers the reviewer-private
//! value of a definitive experiment and raises its reviewer-public value,
//! holding the average belief fixed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::clamp_belief;
use crate::beliefs::{mean_belief, CommunityBeliefs};
use crate::error::Result;
use crate::experiments::Experiment;
use crate::scoring::{entropy, Rule};
use crate::valuation::{private_value_investigator, private_value_reviewers, public_value_reviewers, ValueModel};

/// Random communities keep at least 5% of their mass in the minority camp.
pub const THEOREM_MAX_MAJORITY: f64 = 0.95;
/// Random camps differ by more than this in `Pr[X = 1]`.
pub const THEOREM_MIN_SEPARATION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rule: Rule,
    pub trials: usize,
    /// Smallest `e(P̄) - private` seen; `None` without trials.
    pub min_private_margin: Option<f64>,
    /// Smallest `public - e(P̄)` seen.
    pub min_public_margin: Option<f64>,
    pub violations: usize,
    /// Largest deviation from equality for a community of identical camps.
    pub degenerate_gap: f64,
}

impl TheoremReport {
    /// Every trial strict with both margins above `threshold`, and the
    /// degenerate case an equality to `1e-12`.
    pub fn holds(&self, threshold: f64) -> bool {
        self.violations == 0
            && self.min_private_margin.is_none_or(|m| m > threshold)
            && self.min_public_margin.is_none_or(|m| m > threshold)
            && self.degenerate_gap <= 1e-12
    }
}

/// `(e(P̄) - private, public - e(P̄))` for a two-camp community.
pub(crate) fn margins(rule: Rule, weight: f64, p_major: f64, p_minor: f64) -> Result<(f64, f64)> {
    let exp = Experiment::definitive(2)?;
    let model = ValueModel::divergence(rule);
    let community = CommunityBeliefs::binary(&[(weight, p_major), (1.0 - weight, p_minor)])?;
    let average = mean_belief(&community);
    let e = entropy(&rule, &average)?;
    debug_assert!((private_value_investigator(&model, &exp, &average)? - e).abs() < 1e-12);
    let private = private_value_reviewers(&model, &exp, &community)?;
    let public = public_value_reviewers(&model, &exp, &community)?;
    Ok((e - private, public - e))
}

pub fn heterogeneity_theorem_check<R: Rng + ?Sized>(rule: Rule, trials: usize, rng: &mut R) -> Result<TheoremReport> {
    let mut report = TheoremReport {
        rule,
        trials,
        min_private_margin: None,
        min_public_margin: None,
        violations: 0,
        degenerate_gap: 0.0,
    };
    for _ in 0..trials {
        let weight = rng.random_range(0.5..=THEOREM_MAX_MAJORITY);
        let (p_major, p_minor) = loop {
            let a = clamp_belief(rng.random());
            let b = clamp_belief(rng.random());
            if (a - b).abs() > THEOREM_MIN_SEPARATION {
                break (a, b);
            }
        };
        let (private, public) = margins(rule, weight, p_major, p_minor)?;
        if private <= 0.0 || public <= 0.0 {
            report.violations += 1;
        }
        report.min_private_margin = Some(report.min_private_margin.map_or(private, |m| m.min(private)));
        report.min_public_margin = Some(report.min_public_margin.map_or(public, |m| m.min(public)));
    }
    for p in [0.1, 0.37, 0.5, 0.82] {
        let (private, public) = margins(rule, 0.6, p, p)?;
        report.degenerate_gap = report.degenerate_gap.max(private.abs()).max(public.abs());
    }
    Ok(report)
}
