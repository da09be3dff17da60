use serde::{Deserialize, Serialize};

use crate::beliefs::{Belief, CommunityBeliefs, StateSpace};
use crate::error::Result;
use crate::experiments::Experiment;
use crate::valuation::{
    private_value_investigator, private_value_reviewers, public_value_investigator, public_value_reviewers,
    ValueModel,
};

/// Credence of the minority view in each camp. Private values come out
/// at about this size, so it sits well below the scenario's 1e-9 tolerance.
pub const MARS_EPSILON: f64 = 1e-12;

/// The five valuations of a definitive test for life on Mars, in a field
/// split 70/30 between near-certain camps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarsValues {
    pub private_inv: f64,
    pub public_inv_no_life: f64,
    pub public_inv_life: f64,
    pub private_rev: f64,
    pub public_rev: f64,
}

impl MarsValues {
    pub fn rows(&self) -> [(&'static str, f64); 5] {
        [
            ("private_inv", self.private_inv),
            ("public_inv_no_life", self.public_inv_no_life),
            ("public_inv_life", self.public_inv_life),
            ("private_rev", self.private_rev),
            ("public_rev", self.public_rev),
        ]
    }
}

pub fn mars_scenario() -> Result<MarsValues> {
    let space = StateSpace::new(["no life", "life"])?;
    let exp = Experiment::definitive(space.len())?;
    let model = ValueModel::SurpriseIndicator;
    let skeptic = Belief::new(vec![1.0 - MARS_EPSILON, MARS_EPSILON])?;
    let believer = Belief::new(vec![MARS_EPSILON, 1.0 - MARS_EPSILON])?;
    let community = CommunityBeliefs::new(space, vec![(0.7, skeptic.clone()), (0.3, believer.clone())])?;
    Ok(MarsValues {
        private_inv: private_value_investigator(&model, &exp, &skeptic)?,
        public_inv_no_life: public_value_investigator(&model, &exp, &skeptic, &community)?,
        public_inv_life: public_value_investigator(&model, &exp, &believer, &community)?,
        private_rev: private_value_reviewers(&model, &exp, &community)?,
        public_rev: public_value_reviewers(&model, &exp, &community)?,
    })
}
