//! Limiting-distribution sweeps over `(d, phi, initial state)` grids.

use serde::Serialize;

use crate::analysis::distance::tv_from_uniform;
use crate::analysis::run_parallel;
use crate::coin::{CoinConfig, InitialState, NamedState};
use crate::distribution::Distribution;
use crate::error::{Result, WalkError};
use crate::spectral::SpectralCache;

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub d_values: Vec<usize>,
    pub phi_values: Vec<f64>,
    pub states: Vec<NamedState>,
}

impl SweepGrid {
    pub fn new(d_values: Vec<usize>, phi_values: Vec<f64>, states: Vec<NamedState>) -> Result<Self> {
        if d_values.is_empty() || phi_values.is_empty() || states.is_empty() {
            return Err(WalkError::InvalidParameter("sweep grid has an empty axis".into()));
        }
        if let Some(d) = d_values.iter().find(|&&d| d < 2) {
            return Err(WalkError::CycleTooSmall(*d));
        }
        if let Some(phi) = phi_values.iter().find(|p| !(0.0..8.0).contains(*p)) {
            return Err(WalkError::InvalidParameter(format!("phi {phi} outside [0, 8)")));
        }
        Ok(Self {
            d_values,
            phi_values,
            states,
        })
    }

    /// `phi = m/10` for `m = 0..80`.
    pub fn tenth_steps() -> Vec<f64> {
        (0..80).map(|m| m as f64 / 10.0).collect()
    }

    pub fn cells(&self) -> usize {
        self.d_values.len() * self.phi_values.len() * self.states.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub d: usize,
    pub phi: f64,
    pub state: NamedState,
    pub distribution: Option<Distribution>,
    pub tv_from_uniform: f64,
    pub classified_uniform: bool,
    pub d_mod4: usize,
    pub divisible_by_12: bool,
    /// TV from uniform lies within a decade of the threshold.
    pub boundary: bool,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl SweepRecord {
    fn new(d: usize, phi: f64, state: NamedState, epsilon: f64, outcome: Result<(Distribution, Vec<String>)>) -> Self {
        let base = Self {
            d,
            phi,
            state,
            distribution: None,
            tv_from_uniform: f64::NAN,
            classified_uniform: false,
            d_mod4: d % 4,
            divisible_by_12: d % 12 == 0,
            boundary: false,
            warnings: Vec::new(),
            error: None,
        };
        match outcome {
            Ok((dist, warnings)) => {
                let tv = tv_from_uniform(&dist);
                Self {
                    distribution: Some(dist),
                    tv_from_uniform: tv,
                    classified_uniform: tv < epsilon,
                    boundary: (epsilon / 10.0..=epsilon * 10.0).contains(&tv),
                    warnings,
                    ..base
                }
            }
            Err(e) => Self {
                error: Some(e.to_string()),
                ..base
            },
        }
    }
}

/// One record per grid cell, ordered by `d`, then `phi`, then state.
/// Failed cells carry an error and do not stop the sweep.
pub fn sweep(grid: &SweepGrid, epsilon: f64, jobs: usize) -> Result<Vec<SweepRecord>> {
    if !(epsilon > 0.0) {
        return Err(WalkError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let pairs: Vec<(usize, f64)> = grid
        .d_values
        .iter()
        .flat_map(|&d| grid.phi_values.iter().map(move |&phi| (d, phi)))
        .collect();
    let per_pair = run_parallel(jobs, &pairs, |&(d, phi)| {
        match SpectralCache::recycled(d, &CoinConfig::new(phi)) {
            Ok(cache) => grid
                .states
                .iter()
                .map(|&s| {
                    let outcome = cache.limiting_distribution(&InitialState::named(0, s)).map(|r| {
                        let warnings = r.warnings.iter().map(|w| w.to_string()).collect();
                        (r.distribution, warnings)
                    });
                    SweepRecord::new(d, phi, s, epsilon, outcome)
                })
                .collect::<Vec<_>>(),
            Err(e) => grid
                .states
                .iter()
                .map(|&s| SweepRecord::new(d, phi, s, epsilon, Err(e.clone())))
                .collect(),
        }
    });
    Ok(per_pair.into_iter().flatten().collect())
}
