use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ModelSetup;
use crate::beliefs::{Belief, CommunityBeliefs};
use crate::error::{Error, Result};
use crate::valuation::{private_value_investigator, public_value_investigator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub p: f64,
    pub value: f64,
}

/// Investigator belief `p`, homogeneous peer belief `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeCell {
    pub p: f64,
    pub r: f64,
    pub value: f64,
}

pub(crate) fn unit_grid(grid: usize) -> Result<Vec<f64>> {
    if grid < 3 {
        return Err(Error::InvalidArgument(format!("grid needs >= 3 points, got {grid}")));
    }
    Ok((0..grid).map(|k| k as f64 / (grid - 1) as f64).collect())
}

/// Private value to a lone investigator as a function of her belief.
pub fn lone_wolf_private_landscape(setup: &ModelSetup, grid: usize) -> Result<Vec<LandscapePoint>> {
    let model = setup.value_model();
    unit_grid(grid)?
        .into_par_iter()
        .map(|p| {
            let value = private_value_investigator(&model, &setup.experiment, &Belief::binary(p)?)?;
            Ok(LandscapePoint { p, value })
        })
        .collect()
}

/// Public value to an investigator holding `p` when every peer holds `r`.
/// Row-major in `p`, then `r`.
pub fn lone_wolf_public_landscape(setup: &ModelSetup, grid: usize) -> Result<Vec<LandscapeCell>> {
    let model = setup.value_model();
    let axis = unit_grid(grid)?;
    let cells: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&p| axis.iter().map(move |&r| (p, r)))
        .collect();
    cells
        .into_par_iter()
        .map(|(p, r)| {
            let peers = CommunityBeliefs::binary(&[(1.0, r)])?;
            let value = public_value_investigator(&model, &setup.experiment, &Belief::binary(p)?, &peers)?;
            Ok(LandscapeCell { p, r, value })
        })
        .collect()
}
