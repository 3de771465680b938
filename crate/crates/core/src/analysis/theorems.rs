//! Numerical checks of the two walk equivalences.
//!
//! * Reflection: the recycled walk with parameter `phi` from coin `ψ`
//!   has the same position distribution at every time as the walk with
//!   parameter `-(2 + phi) mod 8` from `Qψ`.
//! * Memory: the memory walk from `P†ψ` matches the recycled walk with
//!   `phi = 2` from `ψ`.

use crate::analysis::distance::total_variation;
use crate::coin::{apply_p_adjoint, apply_q, CoinConfig, Coin4, InitialState};
use crate::error::Result;
use crate::spectral::{eigenvalue_multiset_distance, SpectralCache};
use crate::walk::{Model, WalkState, Walker};

/// Exact equivalences are asserted at this deviation.
pub const THEOREM_TOL: f64 = 1e-10;
/// Limiting-distribution identities are asserted at this distance.
pub const IDENTITY_TOL: f64 = 1e-8;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Steps two walks in lockstep and returns, for each `t` in `0..=t_max`,
/// the largest per-position probability difference.
fn lockstep_deviations(mut a: Walker, mut b: Walker, t_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        out.push(max_abs_diff(&a.position_probs(), &b.position_probs()));
        if t < t_max {
            a.step();
            b.step();
        }
    }
    out
}

fn reflection_pair(d: usize, position: usize, phi: f64, coin: &Coin4) -> Result<(Walker, Walker)> {
    let cfg = CoinConfig::new(phi);
    let left = WalkState::localized(d, Model::Recycled, &InitialState::new(position, *coin)?)?;
    let right = WalkState::localized(d, Model::Recycled, &InitialState::new(position, apply_q(coin))?)?;
    Ok((Walker::new(left, &cfg), Walker::new(right, &cfg.reflected())))
}

fn memory_pair(d: usize, position: usize, coin: &Coin4) -> Result<(Walker, Walker)> {
    let cfg = CoinConfig::new(2.0);
    let memory = WalkState::localized(d, Model::Memory, &InitialState::new(position, apply_p_adjoint(coin))?)?;
    let recycled = WalkState::localized(d, Model::Recycled, &InitialState::new(position, *coin)?)?;
    Ok((Walker::new(memory, &cfg), Walker::new(recycled, &cfg)))
}

/// `max_n |p(n,t,phi;ψ) - p(n,t,phi';Qψ)|` by direct stepping.
pub fn verify_theorem1(d: usize, t: usize, phi: f64, coin: &Coin4) -> Result<f64> {
    verify_theorem1_at(d, 0, t, phi, coin)
}

/// As [`verify_theorem1`] with both walks started at `position`.
pub fn verify_theorem1_at(d: usize, position: usize, t: usize, phi: f64, coin: &Coin4) -> Result<f64> {
    let (a, b) = reflection_pair(d, position, phi, coin)?;
    Ok(*lockstep_deviations(a, b, t).last().unwrap_or(&0.0))
}

/// Worst reflection deviation over all `t` in `0..=t_max`.
pub fn theorem1_max_deviation(d: usize, t_max: usize, phi: f64, coin: &Coin4) -> Result<f64> {
    let (a, b) = reflection_pair(d, 0, phi, coin)?;
    Ok(lockstep_deviations(a, b, t_max).into_iter().fold(0.0, f64::max))
}

/// Max deviation between the memory walk from `P†ψ` and the recycled walk
/// with `phi = 2` from `ψ`, after `t` steps.
pub fn verify_theorem2(d: usize, t: usize, coin: &Coin4) -> Result<f64> {
    let (a, b) = memory_pair(d, 0, coin)?;
    Ok(*lockstep_deviations(a, b, t).last().unwrap_or(&0.0))
}

pub fn theorem2_max_deviation(d: usize, t_max: usize, coin: &Coin4) -> Result<f64> {
    let (a, b) = memory_pair(d, 0, coin)?;
    Ok(lockstep_deviations(a, b, t_max).into_iter().fold(0.0, f64::max))
}

/// Worst eigenvalue-multiset distance between the memory blocks and the
/// recycled blocks at `phi = 2`, over all momenta.
pub fn memory_spectrum_deviation(d: usize) -> Result<f64> {
    let memory = SpectralCache::memory(d)?;
    let recycled = SpectralCache::recycled(d, &CoinConfig::new(2.0))?;
    Ok(memory
        .systems()
        .iter()
        .zip(recycled.systems())
        .map(|(m, r)| eigenvalue_multiset_distance(&m.values, &r.values))
        .fold(0.0, f64::max))
}

/// Parameter pairs related by the reflection, as listed for integer phi.
pub const PBAR_IDENTITY_PAIRS: [(f64, f64); 3] = [(0.0, 6.0), (2.0, 4.0), (1.0, 5.0)];

/// Total variation between `p̄(·, phi; ψ)` and `p̄(·, phi'; Qψ)` for each of
/// [`PBAR_IDENTITY_PAIRS`].
pub fn verify_pbar_identities(d: usize, coin: &Coin4) -> Result<[f64; 3]> {
    let init = InitialState::new(0, *coin)?;
    let reflected = InitialState::new(0, apply_q(coin))?;
    let mut out = [0.0; 3];
    for (slot, (phi, partner)) in out.iter_mut().zip(PBAR_IDENTITY_PAIRS) {
        let a = SpectralCache::recycled(d, &CoinConfig::new(phi))?.limiting_distribution(&init)?;
        let b = SpectralCache::recycled(d, &CoinConfig::new(partner))?.limiting_distribution(&reflected)?;
        *slot = total_variation(&a.distribution, &b.distribution)?;
    }
    Ok(out)
}
