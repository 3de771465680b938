//! Coin registers, the unbalanced coin and the named initial coin states.
//!
//! Every 4-vector and 4x4 matrix of the recycled walk uses the joint basis
//! order `(↓↓, ↓↑, ↑↓, ↑↑)`, first symbol coin₁ (inactive), second coin₂
//! (active). The memory walk uses a different layout, see [`MemoryBasis`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

pub type Coin4 = [Complex64; 4];
pub type Mat4 = Matrix4<Complex64>;

const NORM_TOL: f64 = 1e-12;

/// Joint coin basis of the recycled walk, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoinBasis {
    DownDown = 0,
    DownUp = 1,
    UpDown = 2,
    UpUp = 3,
}

impl CoinBasis {
    pub const ORDER: [CoinBasis; 4] = [
        CoinBasis::DownDown,
        CoinBasis::DownUp,
        CoinBasis::UpDown,
        CoinBasis::UpUp,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Basis of the memory walk's (memory, coin) registers, in storage order.
///
/// The layout is coin-major: index = 2·coin + memory. This is the layout in
/// which the memory walk's Fourier block takes its printed form and the
/// permutation relating it to the recycled walk acts on plain components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MemoryBasis {
    /// memory ↓, coin ↓
    DownDown = 0,
    /// memory ↑, coin ↓
    UpDown = 1,
    /// memory ↓, coin ↑
    DownUp = 2,
    /// memory ↑, coin ↑
    UpUp = 3,
}

impl MemoryBasis {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Memory parameter `phi` reduced to `[0, 8)` and the derived angle
/// `theta = π(1 + phi)/4` of the second coin block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinConfig {
    phi: f64,
    theta: f64,
}

impl CoinConfig {
    pub fn new(phi: f64) -> Self {
        let mut phi = phi.rem_euclid(8.0);
        // rem_euclid can round up to exactly 8.0 for tiny negative inputs
        if phi >= 8.0 {
            phi = 0.0;
        }
        Self {
            phi,
            theta: PI * (1.0 + phi) / 4.0,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Partner parameter `-(2 + phi) mod 8`, whose angle is `-theta` mod 2π.
    pub fn reflected(&self) -> Self {
        Self::new(-(2.0 + self.phi))
    }
}

/// The real 2x2 coin `C(theta) = [[cos, sin], [sin, -cos]]`.
pub fn rotation_coin(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, s], [s, -c]]
}

/// Unbalanced coin `|↓⟩⟨↓| ⊗ C(π/4) + |↑⟩⟨↑| ⊗ C(theta)`.
pub fn make_coin_operator(cfg: &CoinConfig) -> Mat4 {
    let upper = rotation_coin(PI / 4.0);
    let lower = rotation_coin(cfg.theta());
    let mut m = Mat4::zeros();
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c)] = Complex64::new(upper[r][c], 0.0);
            m[(r + 2, c + 2)] = Complex64::new(lower[r][c], 0.0);
        }
    }
    m
}

/// Theorem-1 involution: flips the sign of the `↑↑` component.
pub fn apply_q(v: &Coin4) -> Coin4 {
    [v[0], v[1], v[2], -v[3]]
}

/// Permutation `(α, β, γ, δ) → (α, γ, δ, β)`.
pub fn apply_p(v: &Coin4) -> Coin4 {
    [v[0], v[2], v[3], v[1]]
}

/// Inverse permutation `(α, β, γ, δ) → (α, δ, β, γ)`.
pub fn apply_p_adjoint(v: &Coin4) -> Coin4 {
    [v[0], v[3], v[1], v[2]]
}

pub fn norm(v: &Coin4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &Coin4, b: &Coin4) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The four named initial coin states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedState {
    #[serde(rename = "psi_a")]
    A,
    #[serde(rename = "psi_b")]
    B,
    #[serde(rename = "psi_c")]
    C,
    #[serde(rename = "psi_d")]
    D,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [NamedState::A, NamedState::B, NamedState::C, NamedState::D];

    pub fn coin(self) -> Coin4 {
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            NamedState::A => [r(1.0), z, z, z],
            NamedState::B => [r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), z, z],
            NamedState::C => [r(0.5), r(0.5), r(0.5), r(0.5)],
            NamedState::D => [r(0.5), r(0.5), r(0.5), r(-0.5)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedState::A => "psi_a",
            NamedState::B => "psi_b",
            NamedState::C => "psi_c",
            NamedState::D => "psi_d",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi_a" | "a" => Ok(NamedState::A),
            "psi_b" | "b" => Ok(NamedState::B),
            "psi_c" | "c" => Ok(NamedState::C),
            "psi_d" | "d" => Ok(NamedState::D),
            other => Err(WalkError::UnknownState(other.to_string())),
        }
    }
}

/// A walker localized at one position with a unit coin 4-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub position: usize,
    pub coin: Coin4,
    pub name: Option<NamedState>,
}

impl InitialState {
    pub fn new(position: usize, coin: Coin4) -> Result<Self> {
        let n = norm(&coin);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(WalkError::NotNormalized(n));
        }
        Ok(Self {
            position,
            coin,
            name: None,
        })
    }

    pub fn named(position: usize, name: NamedState) -> Self {
        Self {
            position,
            coin: name.coin(),
            name: Some(name),
        }
    }

    pub fn label(&self) -> String {
        match self.name {
            Some(n) => n.name().to_string(),
            None => "custom".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_unitarity_defect(m: &Mat4) -> f64 {
        (m * m.adjoint() - Mat4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn phi_zero_gives_two_hadamard_blocks() {
        let m = make_coin_operator(&CoinConfig::new(0.0));
        let h = FRAC_1_SQRT_2;
        let expected = [[h, h], [h, -h]];
        for r in 0..2 {
            for c in 0..2 {
                assert_abs_diff_eq!(m[(r, c)].re, expected[r][c], epsilon = 1e-15);
                assert_abs_diff_eq!(m[(r + 2, c + 2)].re, expected[r][c], epsilon = 1e-15);
                // φ=0 decoupling: blocks are identical
                assert_eq!(m[(r, c)], m[(r + 2, c + 2)]);
            }
        }
    }

    #[test]
    fn phi_two_lower_block() {
        let m = make_coin_operator(&CoinConfig::new(2.0));
        let h = FRAC_1_SQRT_2;
        let expected = [[-h, h], [h, h]];
        for r in 0..2 {
            for c in 0..2 {
                assert_abs_diff_eq!(m[(r + 2, c + 2)].re, expected[r][c], epsilon = 1e-15);
            }
        }
        assert_eq!(m[(0, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coin_operator_is_unitary() {
        for i in 0..160 {
            let cfg = CoinConfig::new(i as f64 * 0.05 - 0.3);
            assert!(max_unitarity_defect(&make_coin_operator(&cfg)) < 1e-12);
        }
    }

    #[test]
    fn phi_is_reduced_mod_eight() {
        assert_abs_diff_eq!(CoinConfig::new(9.5).phi(), 1.5);
        assert_abs_diff_eq!(CoinConfig::new(-2.0).phi(), 6.0);
        assert_eq!(CoinConfig::new(8.0).phi(), 0.0);
        assert!(CoinConfig::new(-1e-18).phi() < 8.0);
        let cfg = CoinConfig::new(3.0);
        assert_eq!(cfg.theta(), PI * 4.0 / 4.0);
        assert_abs_diff_eq!(CoinConfig::new(0.0).reflected().phi(), 6.0);
        assert_abs_diff_eq!(CoinConfig::new(2.0).reflected().phi(), 4.0);
        assert_abs_diff_eq!(CoinConfig::new(1.0).reflected().phi(), 5.0);
    }

    #[test]
    fn q_and_p_on_named_states() {
        let a = NamedState::A.coin();
        assert_eq!(apply_q(&a), a);
        assert_eq!(apply_p(&a), a);
        assert_eq!(apply_p_adjoint(&a), a);
        let c = NamedState::C.coin();
        let d = NamedState::D.coin();
        assert_eq!(apply_q(&c), d);
        assert_eq!(apply_q(&d), c);
        let pd = apply_p(&d);
        let expected = [0.5, 0.5, -0.5, 0.5];
        for (z, e) in pd.iter().zip(expected) {
            assert_eq!(*z, Complex64::new(e, 0.0));
        }
    }

    #[test]
    fn named_states_are_unit() {
        for s in NamedState::ALL {
            assert_abs_diff_eq!(norm(&s.coin()), 1.0, epsilon = 1e-15);
            assert_eq!(s.name().parse::<NamedState>().unwrap(), s);
        }
        assert!("psi_e".parse::<NamedState>().is_err());
    }

    #[test]
    fn initial_state_rejects_unnormalized_coin() {
        let one = Complex64::new(1.0, 0.0);
        assert!(InitialState::new(0, [one, one, one, one]).is_err());
        assert!(InitialState::new(3, NamedState::B.coin()).is_ok());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn coin4() -> impl Strategy<Value = Coin4> {
            proptest::array::uniform4((-1.0f64..1.0, -1.0f64..1.0))
                .prop_map(|a| a.map(|(re, im)| Complex64::new(re, im)))
        }

        proptest! {
            #[test]
            fn q_is_an_involution(v in coin4()) {
                prop_assert_eq!(apply_q(&apply_q(&v)), v);
            }

            #[test]
            fn p_adjoint_inverts_p(v in coin4()) {
                prop_assert_eq!(apply_p_adjoint(&apply_p(&v)), v);
                prop_assert_eq!(apply_p(&apply_p_adjoint(&v)), v);
            }
        }
    }
}
