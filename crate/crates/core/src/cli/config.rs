use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{Coin4, InitialState, NamedState};

/// Normalization deviation above which a custom coin draws a warning.
pub const CUSTOM_NORM_WARN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every experiment option. Used both as command-line flags and as the
/// schema of the optional TOML config file; flags win.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Cycle size.
    #[arg(long)]
    pub d: Option<usize>,
    /// Inclusive range of cycle sizes, `A..B`.
    #[arg(long = "d-range")]
    pub d_range: Option<String>,
    /// Memory parameter (reduced mod 8).
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Inclusive memory-parameter grid `start:step:end`, or a comma list.
    #[arg(long = "phi-grid")]
    pub phi_grid: Option<String>,
    /// psi_a | psi_b | psi_c | psi_d | custom:a+bi,c+di,e+fi,g+hi (repeatable).
    #[arg(long)]
    pub state: Vec<String>,
    /// Walk model: recycled | memory.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of steps.
    #[arg(long)]
    pub t: Option<u64>,
    /// Largest horizon.
    #[arg(long = "t-max")]
    pub t_max: Option<u64>,
    /// Total-variation threshold for classifying a distribution as uniform.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweep, verify and residue.
    #[arg(long, env = "CYCLEWALK_JOBS")]
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {}", path.display(), e.message()))
    }

    /// `self` (flags) takes precedence over `file`.
    pub fn over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            d: self.d.or(file.d),
            d_range: self.d_range.or(file.d_range),
            phi: self.phi.or(file.phi),
            phi_grid: self.phi_grid.or(file.phi_grid),
            state: if self.state.is_empty() { file.state } else { self.state },
            model: self.model.or(file.model),
            t: self.t.or(file.t),
            t_max: self.t_max.or(file.t_max),
            epsilon: self.epsilon.or(file.epsilon),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            jobs: self.jobs.or(file.jobs),
        }
    }
}

/// `A..B` (inclusive) or a single integer.
pub fn parse_d_range(s: &str) -> Result<Vec<usize>, String> {
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid cycle size {x:?} in --d-range"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty --d-range {s:?}"));
    }
    Ok((lo..=hi).collect())
}

/// Decimal literal as (integer mantissa, decimal places).
fn parse_decimal(s: &str) -> Result<(i64, u32), String> {
    let s = s.trim();
    let bad = || format!("invalid number {s:?} in --phi-grid");
    let (int_part, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let mantissa = digits.parse::<i64>().map_err(|_| bad())?;
    Ok((mantissa, frac.len() as u32))
}

/// `start:step:end` inclusive, computed on exact decimals so that grid
/// points such as `3.0` come out exact; or a comma-separated list.
pub fn parse_phi_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, step, end] => {
            let decs = [parse_decimal(start)?, parse_decimal(step)?, parse_decimal(end)?];
            let places = decs.iter().map(|d| d.1).max().unwrap_or(0);
            let scale = |(m, p): (i64, u32)| m * 10i64.pow(places - p);
            let (a, h, b) = (scale(decs[0]), scale(decs[1]), scale(decs[2]));
            if h <= 0 || b < a {
                return Err(format!("empty or non-increasing --phi-grid {s:?}"));
            }
            let denom = 10f64.powi(places as i32);
            Ok((0..)
                .map(|i| a + i * h)
                .take_while(|&v| v <= b)
                .map(|v| v as f64 / denom)
                .collect())
        }
        [_] => s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| format!("invalid phi {x:?}")))
            .collect(),
        _ => Err(format!("invalid --phi-grid {s:?}, expected start:step:end")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedState {
    pub init: InitialState,
    /// Norm of a custom vector before normalization, when it was off by
    /// more than [`CUSTOM_NORM_WARN`].
    pub renormalized_from: Option<f64>,
}

pub fn parse_state(s: &str) -> Result<ParsedState, String> {
    if let Some(body) = s.strip_prefix("custom:") {
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("custom state needs four components, got {}", parts.len()));
        }
        let mut coin: Coin4 = [Complex64::new(0.0, 0.0); 4];
        for (slot, p) in coin.iter_mut().zip(&parts) {
            *slot = Complex64::from_str(p.trim()).map_err(|_| format!("invalid complex literal {p:?}"))?;
        }
        let norm = crate::coin::norm(&coin);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err("custom state has zero norm".into());
        }
        for z in &mut coin {
            *z /= norm;
        }
        let init = InitialState::new(0, coin).map_err(|e| e.to_string())?;
        return Ok(ParsedState {
            init,
            renormalized_from: ((norm - 1.0).abs() > CUSTOM_NORM_WARN).then_some(norm),
        });
    }
    let name: NamedState = s.parse().map_err(|e: crate::error::WalkError| e.to_string())?;
    Ok(ParsedState {
        init: InitialState::named(0, name),
        renormalized_from: None,
    })
}
