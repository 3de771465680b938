//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run
//! with `cargo test --test acceptance -- --nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclewalk::analysis::{
    crosscheck, memory_spectrum_deviation, residue_distance_curve, sweep, theorem1_max_deviation,
    theorem2_max_deviation, verify_pbar_identities, SweepGrid,
};
use cyclewalk::spectral::SpectralCache;
use cyclewalk::{CoinConfig, InitialState, Model, NamedState, WalkState, Walker};

fn report(id: u32, title: &str, pass: bool, detail: String) {
    println!("[{}] AC-{id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn within(budget: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took < budget, format!("{:.1}s of {}s budget", took.as_secs_f64(), budget.as_secs()))
}

fn random_state(rng: &mut ChaCha8Rng, d: usize, model: Model) -> WalkState {
    let mut amps: Vec<[Complex64; 4]> = (0..d)
        .map(|_| std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    let norm = amps.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in amps.iter_mut().flatten() {
        *z /= norm;
    }
    WalkState::from_amplitudes(model, amps).unwrap()
}

#[test]
fn ac01_unitarity_and_normalization() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (mut worst_step, mut worst_total) = (0.0f64, 0.0f64);
    for d in 2..=32 {
        for _ in 0..200 {
            let phi = rng.random_range(0.0..8.0);
            for model in [Model::Recycled, Model::Memory] {
                let state = random_state(&mut rng, d, model);
                let initial = state.norm();
                let mut walker = Walker::new(state, &CoinConfig::new(phi));
                let mut prev = initial;
                for _ in 0..500 {
                    walker.step();
                    let now = walker.state().norm();
                    worst_step = worst_step.max((now - prev).abs());
                    prev = now;
                }
                worst_total = worst_total.max((prev - initial).abs());
            }
        }
    }
    let (fast, timing) = within(Duration::from_secs(30), start);
    let pass = worst_step < 1e-12 && worst_total < 1e-9 && fast;
    report(
        1,
        "unitarity",
        pass,
        format!("max per-step drift {worst_step:.2e} (<1e-12), cumulative {worst_total:.2e} (<1e-9), {timing}"),
    );
    assert!(pass);
}

#[test]
fn ac02_spectral_matches_stepping() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 3..=16 {
        for phi in [0.0, 1.0, 2.0, 2.5, 6.0] {
            let cfg = CoinConfig::new(phi);
            let cache = SpectralCache::recycled(d, &cfg).unwrap();
            for s in NamedState::ALL {
                let init = InitialState::named(0, s);
                let mut walker = Walker::new(WalkState::localized(d, Model::Recycled, &init).unwrap(), &cfg);
                for t in 0..=100u32 {
                    let direct = walker.position_probs();
                    for (n, want) in direct.iter().enumerate() {
                        let got = cache.closed_form_probability(n, t, &init).unwrap();
                        worst = worst.max((got - want).abs());
                    }
                    walker.step();
                }
            }
        }
    }
    let (fast, timing) = within(Duration::from_secs(120), start);
    let pass = worst < 1e-8 && fast;
    report(2, "closed form vs stepping", pass, format!("max |Δp| {worst:.2e} (<1e-8), {timing}"));
    assert!(pass);
}

#[test]
fn ac03_reflection_theorem() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 3..=16 {
        for phi in [0.0, 0.7, 1.0, 2.0, 3.3] {
            for s in NamedState::ALL {
                worst = worst.max(theorem1_max_deviation(d, 50, phi, &s.coin()).unwrap());
            }
        }
    }
    let (fast, timing) = within(Duration::from_secs(60), start);
    let pass = worst < 1e-10 && fast;
    report(3, "reflection equivalence", pass, format!("max deviation {worst:.2e} (<1e-10), {timing}"));
    assert!(pass);
}

#[test]
fn ac04_memory_theorem() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 3..=16 {
        for s in NamedState::ALL {
            worst = worst.max(theorem2_max_deviation(d, 50, &s.coin()).unwrap());
        }
    }
    let spectrum = (3..=32)
        .map(|d| memory_spectrum_deviation(d).unwrap())
        .fold(0.0, f64::max);
    let (fast, timing) = within(Duration::from_secs(60), start);
    let pass = worst < 1e-10 && spectrum < 1e-9 && fast;
    report(
        4,
        "memory-walk equivalence",
        pass,
        format!("max deviation {worst:.2e} (<1e-10), eigenvalue multiset gap {spectrum:.2e} (<1e-9), {timing}"),
    );
    assert!(pass);
}

#[test]
fn ac05_limiting_identities() {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for d in 3..=40 {
        for s in NamedState::ALL {
            let tv = verify_pbar_identities(d, &s.coin()).unwrap();
            for i in 0..3 {
                worst[i] = worst[i].max(tv[i]);
            }
        }
    }
    let (fast, timing) = within(Duration::from_secs(120), start);
    let pass = worst.iter().all(|&w| w < 1e-8) && fast;
    report(
        5,
        "limiting identities (0,6) (2,4) (1,5)",
        pass,
        format!("max TV {:.2e} {:.2e} {:.2e} (<1e-8), {timing}", worst[0], worst[1], worst[2]),
    );
    assert!(pass);
}

#[test]
fn ac06_mod4_zero_case() {
    let ds: Vec<usize> = (4..=48).collect();
    let rows = residue_distance_curve(&ds, &NamedState::A.coin(), 4).unwrap();
    let tv = |d: usize| rows.iter().find(|r| r.d == d).unwrap().tv;
    let zero_worst = (4..=48).step_by(4).map(tv).fold(0.0, f64::max);
    let mut ordering_violations = Vec::new();
    for r in 1..=11 {
        let two = tv(4 * r + 2);
        for other in [4 * r, 4 * r + 1, 4 * r + 3] {
            if !(two > tv(other)) {
                ordering_violations.push((4 * r + 2, other));
            }
        }
    }
    let pass = zero_worst < 1e-8 && ordering_violations.is_empty();
    report(
        6,
        "mod-4 residue effect",
        pass,
        format!(
            "max TV at d≡0 (mod 4) {zero_worst:.2e} (<1e-8); d=4r+2 largest for r=1..11, violations {ordering_violations:?}"
        ),
    );
    assert!(pass);
}

#[test]
fn ac07_uniformity_on_desk_grid() {
    let start = Instant::now();
    let grid = SweepGrid::new((2..=50).collect(), SweepGrid::tenth_steps(), NamedState::ALL.to_vec()).unwrap();
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let records = sweep(&grid, 1e-6, jobs).unwrap();
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let mut offenders = Vec::new();
    let mut non_uniform = 0;
    for r in records.iter().filter(|r| r.error.is_none() && !r.classified_uniform) {
        non_uniform += 1;
        let allowed = [0.0, 1.0, 2.0, 4.0, 5.0, 6.0].contains(&r.phi);
        let mod12_ok = !(r.phi == 1.0 || r.phi == 5.0) || r.d % 12 == 0;
        if !allowed || !mod12_ok {
            offenders.push((r.d, r.phi, r.state));
        }
    }
    // classification must not move anywhere in ε ∈ [1e-7, 1e-5]
    let unstable = records
        .iter()
        .filter(|r| r.tv_from_uniform >= 1e-7 && r.tv_from_uniform < 1e-5)
        .count();
    let (fast, timing) = within(Duration::from_secs(20 * 60), start);
    let pass = failed == 0 && offenders.is_empty() && unstable == 0 && fast;
    report(
        7,
        "uniformity on desk grid",
        pass,
        format!(
            "{} cells, {non_uniform} non-uniform, offenders {offenders:?}, ε-unstable {unstable}, failed {failed}, {timing}",
            records.len()
        ),
    );
    assert!(pass);
}

#[test]
fn ac08_odd_cycles_psi_c_phi6() {
    let cfg = CoinConfig::new(6.0);
    let init = InitialState::named(0, NamedState::C);
    let tv_uniform = |d: usize| {
        let r = SpectralCache::recycled(d, &cfg).unwrap().limiting_distribution(&init).unwrap();
        cyclewalk::analysis::tv_from_uniform(&r.distribution)
    };
    let odd_bad: Vec<(usize, f64)> = (3..=51)
        .step_by(2)
        .map(|d| (d, tv_uniform(d)))
        .filter(|&(_, tv)| !(tv < 1e-6))
        .collect();
    let even_bad: Vec<(usize, f64)> = (4..=24)
        .step_by(2)
        .map(|d| (d, tv_uniform(d)))
        .filter(|&(_, tv)| tv < 1e-6)
        .collect();
    let pass = odd_bad.is_empty() && even_bad.is_empty();
    report(
        8,
        "psi_c, phi=6: odd uniform, even non-uniform",
        pass,
        format!("odd d classified non-uniform {odd_bad:?}; even d classified uniform {even_bad:?}"),
    );
    assert!(pass);
}

#[test]
fn ac09_long_run_crosscheck() {
    let start = Instant::now();
    let cases = [
        (5, 0.0, NamedState::A),
        (11, 0.0, NamedState::B),
        (12, 2.0, NamedState::C),
        (11, 0.5, NamedState::B),
    ];
    let mut results = Vec::new();
    for (d, phi, s) in cases {
        let tv = crosscheck(Model::Recycled, d, phi, &InitialState::named(0, s), 1_000_000).unwrap();
        results.push((d, phi, s, tv));
    }
    let worst = results.iter().map(|r| r.3).fold(0.0, f64::max);
    let (fast, timing) = within(Duration::from_secs(300), start);
    let pass = worst < 2e-3 && fast;
    let detail: Vec<String> = results
        .iter()
        .map(|(d, phi, s, tv)| format!("(d={d}, phi={phi}, {s}) {tv:.2e}"))
        .collect();
    report(9, "crosscheck vs T=1e6 average", pass, format!("{} (<2e-3), {timing}", detail.join(", ")));
    assert!(pass);
}

#[test]
fn ac10_determinism() {
    let bin = env!("CARGO_BIN_EXE_cyclewalk");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).env_remove("CYCLEWALK_JOBS").output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let sweep_args = ["sweep", "--d-range", "2..50", "--phi-grid", "0:0.1:7.9", "--jobs", "4"];
    let limiting_args = ["limiting", "--d", "42", "--phi", "0", "--state", "psi_a"];
    let sweep_same = run(&sweep_args) == run(&sweep_args);
    let limiting_same = run(&limiting_args) == run(&limiting_args);
    let pass = sweep_same && limiting_same;
    report(
        10,
        "byte-identical reruns",
        pass,
        format!("sweep identical: {sweep_same}, limiting identical: {limiting_same}"),
    );
    assert!(pass);
}
