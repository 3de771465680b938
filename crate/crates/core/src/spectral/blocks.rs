use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::coin::{CoinConfig, Mat4};
use crate::error::{Result, WalkError};

/// Momentum-`k` block of the recycled walk.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlock {
    pub k: usize,
    pub d: usize,
    pub theta: f64,
    pub matrix: Mat4,
}

/// Momentum-`k` block of the memory walk, in the coin-major memory layout.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryFourierBlock {
    pub k: usize,
    pub d: usize,
    pub matrix: Mat4,
}

/// `(x, y) = (e^{2πik/d}, e^{-2πik/d})`.
fn momentum_phases(k: usize, d: usize) -> Result<(Complex64, Complex64)> {
    if d == 0 || k >= d {
        return Err(WalkError::MomentumOutOfRange { k, d });
    }
    let (s, c) = (2.0 * PI * k as f64 / d as f64).sin_cos();
    Ok((Complex64::new(c, s), Complex64::new(c, -s)))
}

pub fn build_mk(k: usize, d: usize, cfg: &CoinConfig) -> Result<FourierBlock> {
    let (x, y) = momentum_phases(k, d)?;
    let h = FRAC_1_SQRT_2;
    let (sin, cos) = cfg.theta().sin_cos();
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let matrix = Mat4::new(
        x * h, x * h,  z,       z,
        z,     z,      x * cos, x * sin,
        y * h, -y * h, z,       z,
        z,     z,      y * sin, -y * cos,
    );
    Ok(FourierBlock {
        k,
        d,
        theta: cfg.theta(),
        matrix,
    })
}

pub fn build_nk(k: usize, d: usize) -> Result<MemoryFourierBlock> {
    let (x, y) = momentum_phases(k, d)?;
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let matrix = Mat4::new(
        x, z, x,  z,
        z, y, z,  y,
        z, x, z,  -x,
        y, z, -y, z,
    ) * Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(MemoryFourierBlock { k, d, matrix })
}

pub fn unitarity_defect(m: &Mat4) -> f64 {
    (m * m.adjoint() - Mat4::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{Coin4, NamedState};
    use crate::walk::{evolve, Model, WalkState};
    use crate::coin::InitialState;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn k_zero_is_real_hadamard_like() {
        let b = build_mk(0, 7, &CoinConfig::new(0.0)).unwrap();
        let h = FRAC_1_SQRT_2;
        for z in b.matrix.iter() {
            assert_eq!(z.im, 0.0);
            assert!(z.re == 0.0 || (z.re.abs() - h).abs() < 1e-15);
        }
    }

    #[test]
    fn blocks_are_unitary() {
        for d in 2..20 {
            for k in 0..d {
                for phi in [0.0, 0.3, 1.0, 2.0, 4.5, 7.9] {
                    let b = build_mk(k, d, &CoinConfig::new(phi)).unwrap();
                    assert!(unitarity_defect(&b.matrix) < 1e-12);
                }
                assert!(unitarity_defect(&build_nk(k, d).unwrap().matrix) < 1e-12);
            }
        }
    }

    #[test]
    fn phi_two_block_has_printed_form() {
        let (d, k) = (9, 4);
        let (x, y) = momentum_phases(k, d).unwrap();
        let z = c(0.0);
        #[rustfmt::skip]
        let expected = Mat4::new(
            x, x,  z,  z,
            z, z,  -x, x,
            y, -y, z,  z,
            z, z,  y,  y,
        ) * c(FRAC_1_SQRT_2);
        let got = build_mk(k, d, &CoinConfig::new(2.0)).unwrap().matrix;
        assert!((got - expected).norm() < 1e-15);
    }

    #[test]
    fn nk_at_k_zero() {
        let h = FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let expected = Mat4::new(
            c(h), c(0.0), c(h),  c(0.0),
            c(0.0), c(h), c(0.0), c(h),
            c(0.0), c(h), c(0.0), c(-h),
            c(h), c(0.0), c(-h), c(0.0),
        );
        assert!((build_nk(0, 5).unwrap().matrix - expected).norm() < 1e-15);
    }

    #[test]
    fn out_of_range_momentum() {
        assert!(build_mk(5, 5, &CoinConfig::new(0.0)).is_err());
        assert!(build_nk(6, 5).is_err());
    }

    /// The block must reproduce one step of the direct walk on the Fourier
    /// transform of any state: ψ̃(k, t+1) = M_k ψ̃(k, t).
    fn check_block_matches_step(model: Model, block: impl Fn(usize, usize) -> Mat4) {
        let d = 6;
        let init = InitialState::named(2, NamedState::D);
        let s0 = evolve(&WalkState::localized(d, model, &init).unwrap(), 3, &CoinConfig::new(1.3));
        let s1 = evolve(&s0, 1, &CoinConfig::new(1.3));
        let transform = |s: &WalkState, k: usize| -> Coin4 {
            let mut out = [c(0.0); 4];
            for (n, row) in s.amplitudes().iter().enumerate() {
                let ph = Complex64::from_polar(1.0, -2.0 * PI * (k * n) as f64 / d as f64);
                for i in 0..4 {
                    out[i] += row[i] * ph;
                }
            }
            out
        };
        for k in 0..d {
            let before = nalgebra::Vector4::from(transform(&s0, k));
            let after = nalgebra::Vector4::from(transform(&s1, k));
            assert!((block(k, d) * before - after).norm() < 1e-13);
        }
    }

    #[test]
    fn mk_is_the_fourier_image_of_the_recycled_step() {
        check_block_matches_step(Model::Recycled, |k, d| {
            build_mk(k, d, &CoinConfig::new(1.3)).unwrap().matrix
        });
    }

    #[test]
    fn nk_is_the_fourier_image_of_the_memory_step() {
        check_block_matches_step(Model::Memory, |k, d| build_nk(k, d).unwrap().matrix);
    }
}
