//! Walk states and exact unitary time evolution on the d-cycle.
//!
//! A step is two passes over the amplitude table: a per-site coin pass
//! followed by a gather pass that applies the shift (and, for the recycled
//! walk, the active/inactive coin swap).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{norm, CoinConfig, Coin4, InitialState};
use crate::distribution::Distribution;
use crate::error::{Result, WalkError};

const STATE_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Two coin registers with the unbalanced coin and memory-update swap.
    Recycled,
    /// Hadamard coin plus a memory register updated by the four-rule shift.
    Memory,
}

impl std::str::FromStr for Model {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recycled" => Ok(Model::Recycled),
            "memory" => Ok(Model::Memory),
            other => Err(WalkError::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Full amplitude table: row `n` holds the four coin amplitudes at position `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    d: usize,
    model: Model,
    amps: Vec<Coin4>,
}

impl WalkState {
    pub fn localized(d: usize, model: Model, init: &InitialState) -> Result<Self> {
        check_cycle(d)?;
        if init.position >= d {
            return Err(WalkError::PositionOutOfRange {
                position: init.position,
                d,
            });
        }
        let n = norm(&init.coin);
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(WalkError::NotNormalized(n));
        }
        let mut amps = vec![[Complex64::new(0.0, 0.0); 4]; d];
        amps[init.position] = init.coin;
        Ok(Self { d, model, amps })
    }

    pub fn from_amplitudes(model: Model, amps: Vec<Coin4>) -> Result<Self> {
        let d = amps.len();
        check_cycle(d)?;
        let state = Self { d, model, amps };
        let n = state.norm();
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(WalkError::NotNormalized(n));
        }
        Ok(state)
    }

    /// Equal superposition over all positions with the same coin at each.
    pub fn uniform(d: usize, model: Model, coin: &Coin4) -> Result<Self> {
        check_cycle(d)?;
        let scale = 1.0 / (d as f64).sqrt();
        let row = coin.map(|z| z * scale);
        Self::from_amplitudes(model, vec![row; d])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn amplitudes(&self) -> &[Coin4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn expect_model(&self, expected: Model) -> Result<()> {
        if self.model != expected {
            return Err(WalkError::ModelMismatch {
                expected,
                found: self.model,
            });
        }
        Ok(())
    }
}

fn check_cycle(d: usize) -> Result<()> {
    if d < 2 {
        return Err(WalkError::CycleTooSmall(d));
    }
    Ok(())
}

/// Real coefficients of the coin pass, precomputed once per walk.
#[derive(Debug, Clone, Copy)]
enum CoinPass {
    Recycled { cos: f64, sin: f64 },
    Memory,
}

impl CoinPass {
    fn for_model(model: Model, cfg: &CoinConfig) -> Self {
        match model {
            Model::Recycled => {
                let (sin, cos) = cfg.theta().sin_cos();
                CoinPass::Recycled { cos, sin }
            }
            Model::Memory => CoinPass::Memory,
        }
    }

    #[inline]
    fn apply(&self, v: &mut Coin4) {
        let h = FRAC_1_SQRT_2;
        let [a, b, c, d] = *v;
        *v = match *self {
            // diag(C(π/4), C(θ)) on (↓↓, ↓↑, ↑↓, ↑↑)
            CoinPass::Recycled { cos, sin } => {
                [(a + b) * h, (a - b) * h, c * cos + d * sin, c * sin - d * cos]
            }
            // Hadamard on the coin register; layout index = memory + 2·coin
            CoinPass::Memory => [(a + c) * h, (b + d) * h, (a - c) * h, (b - d) * h],
        };
    }
}

/// Gather pass. `right`/`left` are the coin-mixed rows at `n+1` and `n-1`.
#[inline]
fn gather(model: Model, right: &Coin4, left: &Coin4) -> Coin4 {
    match model {
        // ↓ moves to n-1, ↑ to n+1, then the two coins swap:
        // ↓↓ stays, ↑↓ becomes ↓↑, ↓↑ becomes ↑↓, ↑↑ stays.
        Model::Recycled => [right[0], right[2], left[1], left[3]],
        // |n,↓,↓⟩→|n-1,↓,↓⟩  |n,↑,↓⟩→|n+1,↑,↓⟩  |n,↑,↑⟩→|n-1,↓,↑⟩  |n,↓,↑⟩→|n+1,↑,↑⟩
        Model::Memory => [right[0], left[1], right[3], left[2]],
    }
}

/// In-place evolution with reusable buffers, for long runs.
#[derive(Debug, Clone)]
pub struct Walker {
    state: WalkState,
    pass: CoinPass,
    scratch: Vec<Coin4>,
    steps: u64,
}

impl Walker {
    pub fn new(state: WalkState, cfg: &CoinConfig) -> Self {
        let pass = CoinPass::for_model(state.model, cfg);
        let scratch = state.amps.clone();
        Self {
            state,
            pass,
            scratch,
            steps: 0,
        }
    }

    pub fn step(&mut self) {
        let d = self.state.d;
        let model = self.state.model;
        for (dst, src) in self.scratch.iter_mut().zip(&self.state.amps) {
            *dst = *src;
            self.pass.apply(dst);
        }
        let mixed = &self.scratch;
        for (n, out) in self.state.amps.iter_mut().enumerate() {
            let right = &mixed[if n + 1 == d { 0 } else { n + 1 }];
            let left = &mixed[if n == 0 { d - 1 } else { n - 1 }];
            *out = gather(model, right, left);
        }
        self.steps += 1;
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn into_state(self) -> WalkState {
        self.state
    }

    /// Adds the current position probabilities into `acc`.
    pub fn accumulate_probs(&self, acc: &mut [f64]) {
        for (slot, row) in acc.iter_mut().zip(&self.state.amps) {
            *slot += row.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }

    pub fn position_probs(&self) -> Vec<f64> {
        raw_position_probs(&self.state)
    }
}

pub fn step_recycled(state: &WalkState, cfg: &CoinConfig) -> Result<WalkState> {
    state.expect_model(Model::Recycled)?;
    let mut w = Walker::new(state.clone(), cfg);
    w.step();
    Ok(w.into_state())
}

/// One step of the memory walk (Hadamard coin, four-rule shift).
pub fn step_memory(state: &WalkState) -> Result<WalkState> {
    state.expect_model(Model::Memory)?;
    // the memory walk has no memory parameter; any config gives the same pass
    let mut w = Walker::new(state.clone(), &CoinConfig::new(0.0));
    w.step();
    Ok(w.into_state())
}

/// Applies the state's own step operator `steps` times. `cfg` is ignored for
/// the memory walk.
pub fn evolve(state: &WalkState, steps: usize, cfg: &CoinConfig) -> WalkState {
    let mut w = Walker::new(state.clone(), cfg);
    for _ in 0..steps {
        w.step();
    }
    w.into_state()
}

fn raw_position_probs(state: &WalkState) -> Vec<f64> {
    state
        .amps
        .iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

pub fn position_distribution(state: &WalkState) -> Result<Distribution> {
    Distribution::new(raw_position_probs(state))
}
