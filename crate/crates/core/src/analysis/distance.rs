use crate::distribution::Distribution;
use crate::error::{Result, WalkError};

/// Statistical distance `½ Σ |p_n - q_n|`.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    total_variation_raw(p.probs(), q.probs())
}

pub(crate) fn total_variation_raw(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(WalkError::DimensionMismatch(p.len(), q.len()));
    }
    let tv = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(tv.clamp(0.0, 1.0))
}

pub fn tv_from_uniform(p: &Distribution) -> f64 {
    let u = 1.0 / p.d() as f64;
    (0.5 * p.probs().iter().map(|x| (x - u).abs()).sum::<f64>()).clamp(0.0, 1.0)
}

/// True iff `p` is within `epsilon` of uniform in total variation.
pub fn classify_uniform(p: &Distribution, epsilon: f64) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(WalkError::InvalidParameter(format!(
            "uniformity threshold must be positive, got {epsilon}"
        )));
    }
    Ok(tv_from_uniform(p) < epsilon)
}
