//! Experiments built on the walk and spectral layers.

pub mod distance;
pub mod mixing;
pub mod sweep;
pub mod theorems;

use rayon::prelude::*;
use serde::Serialize;

use crate::coin::{apply_q, CoinConfig, Coin4, InitialState};
use crate::error::Result;
use crate::spectral::SpectralCache;

pub use distance::{classify_uniform, total_variation, tv_from_uniform};
pub use mixing::{crosscheck, mixing_curve, mixing_curve_from_state, power_of_two_horizons, running_average, MixingCurve};
pub use sweep::{sweep, SweepGrid, SweepRecord, DEFAULT_EPSILON};
pub use theorems::{
    memory_spectrum_deviation, theorem1_max_deviation, theorem2_max_deviation, verify_pbar_identities,
    verify_theorem1, verify_theorem1_at, verify_theorem2, IDENTITY_TOL, THEOREM_TOL,
};

/// Maps `f` over `items` on a pool of `jobs` threads, keeping input order.
pub fn run_parallel<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueRow {
    pub d: usize,
    pub d_mod4: usize,
    pub tv: f64,
}

/// For each `d`, the distance between `p̄(·, 0; ψ)` and `p̄(·, 2; Qψ)`.
pub fn residue_distance_curve(d_values: &[usize], coin: &Coin4, jobs: usize) -> Result<Vec<ResidueRow>> {
    let init = InitialState::new(0, *coin)?;
    let reflected = InitialState::new(0, apply_q(coin))?;
    run_parallel(jobs, d_values, |&d| {
        let a = SpectralCache::recycled(d, &CoinConfig::new(0.0))?.limiting_distribution(&init)?;
        let b = SpectralCache::recycled(d, &CoinConfig::new(2.0))?.limiting_distribution(&reflected)?;
        Ok(ResidueRow {
            d,
            d_mod4: d % 4,
            tv: total_variation(&a.distribution, &b.distribution)?,
        })
    })
    .into_iter()
    .collect()
}
