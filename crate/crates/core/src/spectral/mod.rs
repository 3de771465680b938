//! Exact evaluation of the instantaneous and time-averaged position
//! distributions through the per-momentum 4x4 blocks.
//!
//! For a walker starting at position 0 with coin `ψ`, every momentum
//! component starts equal to `ψ`. Expanding it in the eigenbasis of each
//! block gives
//!
//! ```text
//! p(n,t)  = 1/d² Σ_{k,m,j,l} ω^{n(m-k)} ᾱ_j(k) α_l(m) (λ̄_j(k) λ_l(m))^t ⟨φ_j(k)|φ_l(m)⟩
//! p̄(n)    = same sum restricted to pairs with λ_j(k) = λ_l(m), without the power
//! ```
//!
//! with `ω = e^{2πi/d}`.

pub mod blocks;
pub mod eigen;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::coin::{inner, CoinConfig, Coin4, InitialState};
use crate::distribution::Distribution;
use crate::error::{Result, WalkError};
use crate::walk::Model;

pub use blocks::{build_mk, build_nk, FourierBlock, MemoryFourierBlock};
pub use eigen::{eigensystem, EigenSystem, CLUSTER_TOL};

/// Largest tolerated imaginary part of an accumulated probability.
pub const IMAGINARY_TOL: f64 = 1e-8;
/// Gaps between sorted eigenphases inside this band are reported: they sit
/// close enough to the matching tolerance that the clustering is ambiguous.
pub const AMBIGUOUS_GAP_BAND: (f64, f64) = (CLUSTER_TOL * 1e-2, CLUSTER_TOL * 1e2);

/// Distance between two phases on the circle, in `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let diff = (a - b).rem_euclid(2.0 * PI);
    diff.min(2.0 * PI - diff)
}

/// `ω^j` for `ω = e^{2πi/d}`, indexed modulo `d`.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(d: usize) -> Self {
        let table = (0..d)
            .map(|j| {
                let (s, c) = (2.0 * PI * j as f64 / d as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { table }
    }

    #[inline]
    pub fn get(&self, j: usize) -> Complex64 {
        self.table[j % self.table.len()]
    }
}

/// Which walk's blocks a cache was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BlockFamily {
    Recycled { phi: f64, theta: f64 },
    Memory,
}

/// A gap between neighbouring eigenphases that falls inside
/// [`AMBIGUOUS_GAP_BAND`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterWarning {
    pub gap: f64,
    pub lower_phase: f64,
    pub upper_phase: f64,
}

impl std::fmt::Display for ClusterWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ambiguous eigenvalue match: phases {:.17e} and {:.17e} differ by {:.3e} rad (match tolerance {:.0e})",
            self.lower_phase, self.upper_phase, self.gap, CLUSTER_TOL
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitingResult {
    pub distribution: Distribution,
    pub warnings: Vec<ClusterWarning>,
}

/// Eigensystems of all `d` momentum blocks of one walk.
#[derive(Debug, Clone)]
pub struct SpectralCache {
    d: usize,
    family: BlockFamily,
    systems: Vec<EigenSystem>,
    roots: RootsOfUnity,
}

/// One eigenpair of one block, with its expansion coefficient.
#[derive(Debug, Clone, Copy)]
struct Mode {
    k: usize,
    phase: f64,
    alpha: Complex64,
    vector: Coin4,
}

impl SpectralCache {
    pub fn recycled(d: usize, cfg: &CoinConfig) -> Result<Self> {
        check_cycle(d)?;
        let systems = (0..d)
            .map(|k| eigensystem(&build_mk(k, d, cfg)?.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d,
            family: BlockFamily::Recycled {
                phi: cfg.phi(),
                theta: cfg.theta(),
            },
            systems,
            roots: RootsOfUnity::new(d),
        })
    }

    pub fn memory(d: usize) -> Result<Self> {
        check_cycle(d)?;
        let systems = (0..d)
            .map(|k| eigensystem(&build_nk(k, d)?.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d,
            family: BlockFamily::Memory,
            systems,
            roots: RootsOfUnity::new(d),
        })
    }

    pub fn for_model(model: Model, d: usize, cfg: &CoinConfig) -> Result<Self> {
        match model {
            Model::Recycled => Self::recycled(d, cfg),
            Model::Memory => Self::memory(d),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> BlockFamily {
        self.family
    }

    pub fn systems(&self) -> &[EigenSystem] {
        &self.systems
    }

    /// `α_j(k) = ⟨φ_j(k)|ψ⟩` for every block.
    pub fn coefficients(&self, psi: &Coin4) -> Vec<[Complex64; 4]> {
        self.systems.iter().map(|s| s.coefficients(psi)).collect()
    }

    fn check_initial(&self, init: &InitialState) -> Result<()> {
        if init.position != 0 {
            return Err(WalkError::NotLocalized);
        }
        let n = crate::coin::norm(&init.coin);
        if (n - 1.0).abs() > 1e-10 {
            return Err(WalkError::NotNormalized(n));
        }
        Ok(())
    }

    /// `α_j(k) λ_j(k)^t`.
    fn evolved_coefficients(&self, psi: &Coin4, t: u32) -> Vec<[Complex64; 4]> {
        self.systems
            .iter()
            .map(|s| {
                let a = s.coefficients(psi);
                std::array::from_fn(|j| a[j] * s.values[j].powu(t))
            })
            .collect()
    }

    /// `p(n,t)` as the literal quadruple sum over `(k, m, j, l)`.
    pub fn closed_form_probability(&self, n: usize, t: u32, init: &InitialState) -> Result<f64> {
        self.check_initial(init)?;
        if n >= self.d {
            return Err(WalkError::PositionOutOfRange { position: n, d: self.d });
        }
        let d = self.d;
        let beta = self.evolved_coefficients(&init.coin, t);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..d {
            for m in 0..d {
                let phase = self.roots.get(n * ((m + d - k) % d));
                for j in 0..4 {
                    let left = beta[k][j].conj();
                    let vj = &self.systems[k].vectors[j];
                    for l in 0..4 {
                        let overlap = inner(vj, &self.systems[m].vectors[l]);
                        acc += phase * left * beta[m][l] * overlap;
                    }
                }
            }
        }
        let p = acc / (d * d) as f64;
        finish_probability(p)
    }

    /// All of `p(·,t)` by rebuilding the position amplitudes from the modes:
    /// `ψ(n,t) = 1/d Σ_k ω^{nk} Σ_j α_j(k) λ_j(k)^t φ_j(k)`.
    pub fn closed_form_distribution(&self, t: u32, init: &InitialState) -> Result<Distribution> {
        self.check_initial(init)?;
        let d = self.d;
        let beta = self.evolved_coefficients(&init.coin, t);
        let momentum: Vec<Coin4> = self
            .systems
            .iter()
            .zip(&beta)
            .map(|(s, b)| {
                let mut v = [Complex64::new(0.0, 0.0); 4];
                for j in 0..4 {
                    for i in 0..4 {
                        v[i] += b[j] * s.vectors[j][i];
                    }
                }
                v
            })
            .collect();
        let probs = (0..d)
            .map(|n| {
                let mut amp = [Complex64::new(0.0, 0.0); 4];
                for (k, v) in momentum.iter().enumerate() {
                    let w = self.roots.get(n * k);
                    for i in 0..4 {
                        amp[i] += w * v[i];
                    }
                }
                amp.iter().map(|z| z.norm_sqr()).sum::<f64>() / (d * d) as f64
            })
            .collect();
        Distribution::new(probs)
    }

    fn modes(&self, psi: &Coin4) -> Vec<Mode> {
        let mut modes = Vec::with_capacity(4 * self.d);
        for (k, sys) in self.systems.iter().enumerate() {
            let alpha = sys.coefficients(psi);
            for j in 0..4 {
                modes.push(Mode {
                    k,
                    phase: sys.values[j].arg(),
                    alpha: alpha[j],
                    vector: sys.vectors[j],
                });
            }
        }
        modes
    }

    /// Time-averaged distribution: the quadruple sum restricted to matching
    /// eigenvalue pairs.
    ///
    /// All `4d` eigenphases are sorted and split into clusters wherever the
    /// gap to the next phase reaches [`CLUSTER_TOL`] (the first and last
    /// clusters join if they meet across ±π). Only pairs inside a cluster
    /// contribute. Their weights are binned by `(m - k) mod d`, so the final
    /// transform is `O(d²)`.
    pub fn limiting_distribution(&self, init: &InitialState) -> Result<LimitingResult> {
        self.check_initial(init)?;
        let d = self.d;
        let mut modes = self.modes(&init.coin);
        modes.sort_by(|a, b| a.phase.total_cmp(&b.phase).then(a.k.cmp(&b.k)));

        let (clusters, warnings) = cluster_sorted_phases(&modes.iter().map(|m| m.phase).collect::<Vec<_>>());

        let mut binned = vec![Complex64::new(0.0, 0.0); d];
        for cluster in &clusters {
            for &a in cluster {
                let ma = &modes[a];
                let left = ma.alpha.conj();
                for &b in cluster {
                    let mb = &modes[b];
                    let w = left * mb.alpha * inner(&ma.vector, &mb.vector);
                    binned[(mb.k + d - ma.k) % d] += w;
                }
            }
        }

        let scale = 1.0 / (d * d) as f64;
        let probs = (0..d)
            .map(|n| {
                let p: Complex64 = binned
                    .iter()
                    .enumerate()
                    .map(|(r, w)| w * self.roots.get(n * r))
                    .sum();
                finish_probability(p * scale)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LimitingResult {
            distribution: Distribution::new(probs)?,
            warnings,
        })
    }
}

/// Groups indices of ascending phases in `(-π, π]` into clusters.
fn cluster_sorted_phases(phases: &[f64]) -> (Vec<Vec<usize>>, Vec<ClusterWarning>) {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut warnings = Vec::new();
    let mut note_gap = |gap: f64, lo: f64, hi: f64| {
        if gap >= AMBIGUOUS_GAP_BAND.0 && gap <= AMBIGUOUS_GAP_BAND.1 {
            warnings.push(ClusterWarning {
                gap,
                lower_phase: lo,
                upper_phase: hi,
            });
        }
    };
    for (i, &phase) in phases.iter().enumerate() {
        match clusters.last_mut() {
            Some(current) if phase - phases[i - 1] < CLUSTER_TOL => {
                note_gap(phase - phases[i - 1], phases[i - 1], phase);
                current.push(i);
            }
            _ => {
                if i > 0 {
                    note_gap(phase - phases[i - 1], phases[i - 1], phase);
                }
                clusters.push(vec![i]);
            }
        }
    }
    if clusters.len() > 1 {
        let first = phases[0];
        let last = phases[phases.len() - 1];
        let wrap_gap = first + 2.0 * PI - last;
        note_gap(wrap_gap, last, first);
        if wrap_gap < CLUSTER_TOL {
            let tail = clusters.pop().unwrap_or_default();
            clusters[0].extend(tail);
        }
    }
    (clusters, warnings)
}

/// Largest distance between matched elements of two eigenvalue multisets,
/// matching each element of `a` greedily to its nearest unused element of `b`.
pub fn eigenvalue_multiset_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let mut used = [false; 4];
    let mut worst: f64 = 0.0;
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        if let Some((idx, dist)) = best {
            used[idx] = true;
            worst = worst.max(dist);
        }
    }
    worst
}

fn finish_probability(p: Complex64) -> Result<f64> {
    if p.im.abs() >= IMAGINARY_TOL {
        return Err(WalkError::ImaginaryResidue(p.im));
    }
    Ok(p.re)
}

fn check_cycle(d: usize) -> Result<()> {
    if d < 2 {
        return Err(WalkError::CycleTooSmall(d));
    }
    Ok(())
}

/// `p(n,t)` for the recycled walk started at position 0.
pub fn closed_form_probability(
    n: usize,
    t: u32,
    cfg: &CoinConfig,
    d: usize,
    init: &InitialState,
) -> Result<f64> {
    SpectralCache::recycled(d, cfg)?.closed_form_probability(n, t, init)
}

pub fn limiting_distribution(cfg: &CoinConfig, d: usize, init: &InitialState) -> Result<LimitingResult> {
    SpectralCache::recycled(d, cfg)?.limiting_distribution(init)
}

/// Time-averaged distribution of the memory walk; `init.coin` is in the
/// memory walk's coin-major layout.
pub fn limiting_distribution_memory(d: usize, init: &InitialState) -> Result<LimitingResult> {
    SpectralCache::memory(d)?.limiting_distribution(init)
}
