//! Strictly proper scoring rules and the quantities they induce.
//!
//! Scores are negatively oriented: a larger score means the realized state
//! was less consistent with the forecast. Every derived quantity is an
//! expectation over a belief; states carrying zero weight contribute nothing,
//! so a rule is only ever asked to score states the weighting belief admits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::beliefs::Belief;
use crate::error::{Error, Result};

/// A scoring rule `S(P, x)`.
pub trait ScoringRule {
    /// Penalty for forecasting `forecast` when state `realized` occurs.
    fn score(&self, forecast: &Belief, realized: usize) -> Result<f64>;
}

/// The built-in strictly proper rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Half the quadratic distance to the realized indicator vector, which
    /// is exactly `(x - p)^2` on a binary space.
    Brier,
    /// Surprisal in bits, `-log2 p_x`.
    Ignorance,
}

impl Rule {
    pub const ALL: [Rule; 2] = [Rule::Brier, Rule::Ignorance];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Brier => "brier",
            Rule::Ignorance => "ignorance",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brier" => Ok(Rule::Brier),
            "ignorance" | "log" | "logarithmic" => Ok(Rule::Ignorance),
            other => Err(Error::InvalidArgument(format!("unknown scoring rule `{other}`"))),
        }
    }
}

impl ScoringRule for Rule {
    fn score(&self, forecast: &Belief, realized: usize) -> Result<f64> {
        if realized >= forecast.len() {
            return Err(Error::StateOutOfRange {
                index: realized,
                len: forecast.len(),
            });
        }
        match self {
            Rule::Brier => Ok(0.5
                * forecast
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(j, p)| {
                        let hit = if j == realized { 1.0 } else { 0.0 };
                        (hit - p).powi(2)
                    })
                    .sum::<f64>()),
            Rule::Ignorance => {
                let p = forecast.prob(realized);
                if p <= 0.0 {
                    Err(Error::InfiniteScore { state: realized })
                } else {
                    Ok(-p.log2())
                }
            }
        }
    }
}

impl<R: ScoringRule + ?Sized> ScoringRule for &R {
    fn score(&self, forecast: &Belief, realized: usize) -> Result<f64> {
        (**self).score(forecast, realized)
    }
}

/// Convenience wrapper around [`ScoringRule::score`].
pub fn score<R: ScoringRule + ?Sized>(rule: &R, forecast: &Belief, realized: usize) -> Result<f64> {
    rule.score(forecast, realized)
}

/// `d(actual || forecast)`: the expected extra penalty from forecasting with
/// `forecast` when states are really distributed as `actual`.
pub fn divergence<R: ScoringRule + ?Sized>(
    rule: &R,
    actual: &Belief,
    forecast: &Belief,
) -> Result<f64> {
    actual.ensure_same_len(forecast)?;
    let mut total = 0.0;
    for (x, &w) in actual.probs().iter().enumerate() {
        if w > 0.0 {
            total += w * (rule.score(forecast, x)? - rule.score(actual, x)?);
        }
    }
    // Rounding can leave -1e-17 for identical arguments.
    Ok(total.max(0.0))
}

/// Generalized entropy `e(P)`: the expected self-score.
pub fn entropy<R: ScoringRule + ?Sized>(rule: &R, belief: &Belief) -> Result<f64> {
    scoring_function(rule, belief, belief)
}

/// Expected score of issuing `issued` when states follow `actual`.
pub fn scoring_function<R: ScoringRule + ?Sized>(
    rule: &R,
    issued: &Belief,
    actual: &Belief,
) -> Result<f64> {
    issued.ensure_same_len(actual)?;
    let mut total = 0.0;
    for (x, &w) in actual.probs().iter().enumerate() {
        if w > 0.0 {
            total += w * rule.score(issued, x)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(p: f64) -> Belief {
        Belief::binary(p).unwrap()
    }

    // Kullback-Leibler divergence in bits, written out independently.
    fn kl_bits(p: f64, q: f64) -> f64 {
        let term = |a: f64, c: f64| if a == 0.0 { 0.0 } else { a * (a / c).log2() };
        term(p, q) + term(1.0 - p, 1.0 - q)
    }

    #[test]
    fn score_examples() {
        assert!((score(&Rule::Brier, &b(0.7), 1).unwrap() - 0.09).abs() < 1e-15);
        let quarter = Belief::new(vec![0.25, 0.25, 0.5]).unwrap();
        assert!((score(&Rule::Ignorance, &quarter, 0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(score(&Rule::Brier, &b(1.0), 1).unwrap(), 0.0);
        assert_eq!(score(&Rule::Brier, &b(0.0), 0).unwrap(), 0.0);
    }

    #[test]
    fn ignorance_signals_infinite_score() {
        assert_eq!(
            score(&Rule::Ignorance, &b(0.0), 1),
            Err(Error::InfiniteScore { state: 1 })
        );
        assert!(matches!(
            divergence(&Rule::Ignorance, &b(0.5), &b(1.0)),
            Err(Error::InfiniteScore { .. })
        ));
        assert!(score(&Rule::Brier, &b(0.5), 2).is_err());
    }

    #[test]
    fn divergence_examples() {
        for rule in Rule::ALL {
            for p in [0.0, 0.2, 0.5, 0.93, 1.0] {
                assert_eq!(divergence(&rule, &b(p), &b(p)).unwrap(), 0.0);
            }
        }
        // 0.7 * (0.64 - 0.09) + 0.3 * (0.04 - 0.49)
        let d = divergence(&Rule::Brier, &b(0.7), &b(0.2)).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        assert!((0.7 * (0.64 - 0.09) + 0.3 * (0.04 - 0.49) - 0.25f64).abs() < 1e-12);

        let d = divergence(&Rule::Ignorance, &b(0.5), &b(0.25)).unwrap();
        let hand = 0.5 * (0.5f64 / 0.25).log2() + 0.5 * (0.5f64 / 0.75).log2();
        assert!((d - hand).abs() < 1e-12);
        assert!((d - 0.20752).abs() < 1e-5);
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&Rule::Brier, &b(0.5)).unwrap() - 0.25).abs() < 1e-15);
        assert!((entropy(&Rule::Ignorance, &b(0.5)).unwrap() - 1.0).abs() < 1e-15);
        for rule in Rule::ALL {
            assert_eq!(entropy(&rule, &b(0.0)).unwrap(), 0.0);
            assert_eq!(entropy(&rule, &b(1.0)).unwrap(), 0.0);
            let mass = Belief::point_mass(3, 2).unwrap();
            assert_eq!(entropy(&rule, &mass).unwrap(), 0.0);
        }
    }

    #[test]
    fn scoring_function_examples() {
        for rule in Rule::ALL {
            let p = b(0.35);
            assert_eq!(
                scoring_function(&rule, &p, &p).unwrap(),
                entropy(&rule, &p).unwrap()
            );
        }
        let s = scoring_function(&Rule::Brier, &b(0.2), &b(0.7)).unwrap();
        assert!((s - 0.46).abs() < 1e-12);
        let e = entropy(&Rule::Brier, &b(0.7)).unwrap();
        let d = divergence(&Rule::Brier, &b(0.7), &b(0.2)).unwrap();
        assert!((e - 0.21).abs() < 1e-12);
        assert!((s - (e + d)).abs() < 1e-12);
    }

    #[test]
    fn multiclass_brier_is_proper() {
        let p = Belief::new(vec![0.2, 0.5, 0.3]).unwrap();
        let r = Belief::new(vec![0.6, 0.1, 0.3]).unwrap();
        // Half squared Euclidean distance.
        let d = divergence(&Rule::Brier, &p, &r).unwrap();
        assert!((d - 0.5 * (0.16 + 0.16)).abs() < 1e-12);
        assert!(scoring_function(&Rule::Brier, &r, &p).unwrap() > entropy(&Rule::Brier, &p).unwrap());
    }

    /// Linear toy rule plugged in through the trait.
    struct AbsoluteRule;

    impl ScoringRule for AbsoluteRule {
        fn score(&self, forecast: &Belief, realized: usize) -> Result<f64> {
            Ok(1.0 - forecast.prob(realized))
        }
    }

    #[test]
    fn custom_rules_plug_in() {
        // The linear rule is improper: reporting the mode beats honesty.
        let honest = scoring_function(&AbsoluteRule, &b(0.7), &b(0.7)).unwrap();
        let mode = scoring_function(&AbsoluteRule, &b(1.0), &b(0.7)).unwrap();
        assert!(mode < honest);
        assert_eq!(entropy(&AbsoluteRule, &b(1.0)).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn strict_propriety(p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
            prop_assume!((p1 - p2).abs() > 1e-6);
            prop_assert!(divergence(&Rule::Brier, &b(p2), &b(p1)).unwrap() > 0.0);
            if p1 > 0.0 && p1 < 1.0 {
                prop_assert!(divergence(&Rule::Ignorance, &b(p2), &b(p1)).unwrap() > 0.0);
            }
        }

        #[test]
        fn brier_closed_form(p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
            let d = divergence(&Rule::Brier, &b(p2), &b(p1)).unwrap();
            prop_assert!((d - (p1 - p2).powi(2)).abs() < 1e-12);
        }

        #[test]
        fn ignorance_is_kl(p1 in 1e-6f64..(1.0 - 1e-6), p2 in 0.0f64..=1.0) {
            let d = divergence(&Rule::Ignorance, &b(p2), &b(p1)).unwrap();
            prop_assert!((d - kl_bits(p2, p1)).abs() < 1e-9);
        }

        #[test]
        fn entropy_concavity(p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0, lambda in 0.01f64..0.99) {
            for rule in Rule::ALL {
                let mixed = b(lambda * p1 + (1.0 - lambda) * p2);
                let lhs = entropy(&rule, &mixed).unwrap();
                let rhs = lambda * entropy(&rule, &b(p1)).unwrap()
                    + (1.0 - lambda) * entropy(&rule, &b(p2)).unwrap();
                prop_assert!(lhs >= rhs - 1e-12);
                if (p1 - p2).abs() > 0.05 {
                    prop_assert!(lhs - rhs > 1e-10);
                }
            }
        }

        #[test]
        fn decomposition(r in 0.01f64..0.99, p in 0.0f64..=1.0) {
            for rule in Rule::ALL {
                let s = scoring_function(&rule, &b(r), &b(p)).unwrap();
                let e = entropy(&rule, &b(p)).unwrap();
                let d = divergence(&rule, &b(p), &b(r)).unwrap();
                prop_assert!((s - (e + d)).abs() < 1e-12);
            }
        }

        #[test]
        fn linear_in_actual(r in 0.01f64..0.99, p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
            for rule in Rule::ALL {
                let mid = scoring_function(&rule, &b(r), &b(0.5 * p1 + 0.5 * p2)).unwrap();
                let avg = 0.5 * scoring_function(&rule, &b(r), &b(p1)).unwrap()
                    + 0.5 * scoring_function(&rule, &b(r), &b(p2)).unwrap();
                prop_assert!((mid - avg).abs() < 1e-12);
            }
        }
    }
}
