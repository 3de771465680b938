use serde::Serialize;

use crate::error::{Result, WalkError};

const SUM_TOL: f64 = 1e-9;
const NEGATIVE_TOL: f64 = 1e-14;

/// Probability distribution over the `d` positions of the cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `probs` (sum 1, no entry below `-1e-14`) and clamps tiny
    /// negative round-off to zero.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(WalkError::InvalidDistribution("empty".into()));
        }
        if let Some((n, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < -NEGATIVE_TOL)
        {
            return Err(WalkError::InvalidDistribution(format!(
                "entry {n} is {p:e}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(WalkError::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        for p in &mut probs {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Ok(Self { probs })
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            probs: vec![1.0 / d as f64; d],
        }
    }

    pub fn point_mass(d: usize, n: usize) -> Self {
        let mut probs = vec![0.0; d];
        probs[n] = 1.0;
        Self { probs }
    }

    pub fn d(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, n: usize) -> &f64 {
        &self.probs[n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_round_off() {
        let p = Distribution::new(vec![0.5, 0.5 + 1e-15, -1e-15]).unwrap();
        assert_eq!(p[2], 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.1, -0.1]).is_err());
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn uniform_and_point_mass() {
        let u = Distribution::uniform(4);
        assert_eq!(u.probs(), &[0.25; 4]);
        let p = Distribution::point_mass(3, 1);
        assert_eq!(p.probs(), &[0.0, 1.0, 0.0]);
    }
}
