//! Orthonormal eigensystems of 4x4 unitary blocks.
//!
//! A unitary matrix is normal, so its complex Schur form is diagonal and the
//! Schur vectors are already an orthonormal eigenbasis, including inside
//! degenerate eigenspaces. The decomposition itself comes from nalgebra; the
//! result is validated by residual and re-orthonormalized per eigenvalue
//! cluster.

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::coin::{inner, Coin4, Mat4};
use crate::error::{Result, WalkError};
use crate::spectral::blocks::unitarity_defect;
use crate::spectral::phase_distance;

const UNITARY_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-9;
const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;
/// Eigenvalues whose phases differ by less than this share an eigenspace.
pub const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: [Complex64; 4],
    /// `vectors[j]` is the eigenvector for `values[j]`.
    pub vectors: [Coin4; 4],
}

impl EigenSystem {
    pub fn phases(&self) -> [f64; 4] {
        self.values.map(|z| z.arg())
    }

    /// Expansion coefficients `⟨φ_j|ψ⟩`.
    pub fn coefficients(&self, psi: &Coin4) -> [Complex64; 4] {
        std::array::from_fn(|j| inner(&self.vectors[j], psi))
    }

    pub fn max_residual(&self, m: &Mat4) -> f64 {
        (0..4)
            .map(|j| {
                let v = nalgebra::Vector4::from(self.vectors[j]);
                (m * v - v * self.values[j]).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 1.0 } else { 0.0 };
                let got = inner(&self.vectors[a], &self.vectors[b]);
                worst = worst.max((got - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }
}

pub fn eigensystem(m: &Mat4) -> Result<EigenSystem> {
    let defect = unitarity_defect(m);
    if !(defect <= UNITARY_TOL) {
        return Err(WalkError::NonUnitary(defect));
    }
    let schur = Schur::try_new(*m, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| WalkError::Eigen("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: [Complex64; 4] = std::array::from_fn(|j| t[(j, j)]);
    let mut vectors: [Coin4; 4] = std::array::from_fn(|j| std::array::from_fn(|i| q[(i, j)]));

    reorthonormalize_clusters(&values, &mut vectors);

    let sys = EigenSystem { values, vectors };
    let residual = sys.max_residual(m);
    if !(residual < RESIDUAL_TOL) {
        return Err(WalkError::Eigen(format!("eigenpair residual {residual:e}")));
    }
    Ok(sys)
}

/// Modified Gram-Schmidt within each group of (near-)equal eigenvalues.
fn reorthonormalize_clusters(values: &[Complex64; 4], vectors: &mut [Coin4; 4]) {
    let mut assigned = [false; 4];
    for a in 0..4 {
        if assigned[a] {
            continue;
        }
        let members: Vec<usize> = (a..4)
            .filter(|&b| !assigned[b] && phase_distance(values[a].arg(), values[b].arg()) < CLUSTER_TOL)
            .collect();
        for &b in &members {
            assigned[b] = true;
        }
        for (pos, &b) in members.iter().enumerate() {
            for &prev in &members[..pos] {
                let proj = inner(&vectors[prev], &vectors[b]);
                let p = vectors[prev];
                for i in 0..4 {
                    vectors[b][i] -= p[i] * proj;
                }
            }
            let n = vectors[b].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in &mut vectors[b] {
                *z /= n;
            }
        }
    }
}
