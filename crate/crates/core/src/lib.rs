//! Recycled-coin and memory quantum walks on the d-cycle.
//!
//! * [`walk`]: exact time evolution by direct stepping.
//! * [`spectral`]: closed-form and time-averaged distributions from the
//!   per-momentum eigensystems.
//! * [`analysis`]: distances, parameter sweeps, equivalence checks and
//!   mixing curves.
//! * [`cli`]: the `cyclewalk` command-line front end and its table output.

pub mod analysis;
pub mod cli;
pub mod coin;
pub mod distribution;
pub mod error;
pub mod spectral;
pub mod walk;

pub use coin::{CoinConfig, Coin4, InitialState, NamedState};
pub use distribution::Distribution;
pub use error::{Result, WalkError};
pub use walk::{Model, WalkState, Walker};
