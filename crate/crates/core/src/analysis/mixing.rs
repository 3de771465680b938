//! Finite-horizon time averages: mixing curves and long-run cross-checks.

use serde::Serialize;

use crate::analysis::distance::{total_variation_raw, tv_from_uniform};
use crate::coin::{CoinConfig, InitialState};
use crate::distribution::Distribution;
use crate::error::{Result, WalkError};
use crate::spectral::SpectralCache;
use crate::walk::{Model, WalkState, Walker};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingCurve {
    pub d: usize,
    pub phi: f64,
    pub state: String,
    pub horizons: Vec<u64>,
    /// `SD(T)` for each horizon.
    pub distances: Vec<f64>,
}

/// Powers of two up to `t_max`, plus `t_max` itself.
pub fn power_of_two_horizons(t_max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(1u64), |t| t.checked_mul(2))
        .take_while(|&t| t <= t_max)
        .collect();
    if out.last() != Some(&t_max) && t_max >= 1 {
        out.push(t_max);
    }
    out
}

/// `SD(T) = ½ Σ_n |1/T Σ_{t=0}^{T-1} p(n,t) - 1/d|`, sampled at `horizons`.
pub fn mixing_curve_from_state(
    state: WalkState,
    cfg: &CoinConfig,
    label: &str,
    horizons: &[u64],
) -> Result<MixingCurve> {
    let mut horizons = horizons.to_vec();
    horizons.sort_unstable();
    horizons.dedup();
    let t_max = *horizons
        .last()
        .ok_or_else(|| WalkError::InvalidParameter("no mixing horizons".into()))?;
    if horizons[0] == 0 {
        return Err(WalkError::InvalidParameter("mixing horizons must be at least 1".into()));
    }
    let d = state.d();
    let mut walker = Walker::new(state, cfg);
    let mut acc = vec![0.0; d];
    let mut distances = Vec::with_capacity(horizons.len());
    let mut next = horizons.iter().peekable();
    for t in 1..=t_max {
        walker.accumulate_probs(&mut acc);
        if next.peek() == Some(&&t) {
            next.next();
            let avg = Distribution::new(acc.iter().map(|p| p / t as f64).collect())?;
            distances.push(tv_from_uniform(&avg));
        }
        if t < t_max {
            walker.step();
        }
    }
    Ok(MixingCurve {
        d,
        phi: cfg.phi(),
        state: label.to_string(),
        horizons,
        distances,
    })
}

pub fn mixing_curve(d: usize, phi: f64, init: &InitialState, horizons: &[u64]) -> Result<MixingCurve> {
    let cfg = CoinConfig::new(phi);
    let state = WalkState::localized(d, Model::Recycled, init)?;
    mixing_curve_from_state(state, &cfg, &init.label(), horizons)
}

/// `1/T Σ_{t=1}^{T} p(·,t)` by direct stepping.
pub fn running_average(state: WalkState, cfg: &CoinConfig, horizon: u64) -> Result<Distribution> {
    if horizon == 0 {
        return Err(WalkError::InvalidParameter("averaging horizon must be at least 1".into()));
    }
    let d = state.d();
    let mut walker = Walker::new(state, cfg);
    let mut acc = vec![0.0; d];
    for _ in 0..horizon {
        walker.step();
        walker.accumulate_probs(&mut acc);
    }
    Distribution::new(acc.into_iter().map(|p| p / horizon as f64).collect())
}

/// TV between the spectral limiting distribution and the `T`-step running
/// average of the simulated walk.
pub fn crosscheck(model: Model, d: usize, phi: f64, init: &InitialState, horizon: u64) -> Result<f64> {
    let cfg = CoinConfig::new(phi);
    let limit = SpectralCache::for_model(model, d, &cfg)?.limiting_distribution(init)?;
    let avg = running_average(WalkState::localized(d, model, init)?, &cfg, horizon)?;
    total_variation_raw(avg.probs(), limit.distribution.probs())
}
