//! Cross-module invariants: scheme soundness against the Monte Carlo oracle,
//! the Gaussian per-layer lower bounds, the deterministic/Gaussian
//! correspondence, and CLI determinism.

use imac::cli;
use imac::config::{Cell, SymmetricConfig};
use imac::gauss::{self, GaussConfig, LayerRole};
use imac::ld;
use imac::ltd;
use imac::oracle;
use imac::rng::SplitMix64;

// ---------------------------------------------------------------------------
// Scheme soundness: condition-passing allocations rarely fail the rank oracle
// ---------------------------------------------------------------------------

#[test]
fn condition_passing_allocations_meet_outage_budget() {
    let delta = 0.5;
    let samples = 1500u64;
    let tol = delta + 5.0 * (delta / samples as f64).sqrt();
    let mut rng = SplitMix64::new(0x50F7);
    let mut done = 0u32;
    while done < 300 {
        let n1 = 4 + rng.next_below(21) as u32;
        let n2 = rng.next_below(n1 as u64 + 1) as u32;
        let ni = rng.next_below(2 * n1 as u64 + 1) as u32;
        let cfg = SymmetricConfig::new(n1, n2, ni);
        let alloc = ltd::shave_for_decoding(&ltd::allocate(&cfg).unwrap(), &cfg, delta).unwrap();
        if !ltd::check_decoding(&alloc, &cfg, delta).pass() {
            continue; // logarithmic terms can swallow tiny configurations
        }
        let est =
            oracle::outage_fraction(&cfg.to_full(), &alloc.levels, samples, done as u64).unwrap();
        assert!(
            est.fraction() <= tol,
            "outage {} beyond {tol} at {cfg:?} ({})",
            est.fraction(),
            alloc.regime
        );
        done += 1;
    }
}

// ---------------------------------------------------------------------------
// Linear vs lower-triangular sweeps
// ---------------------------------------------------------------------------

#[test]
fn ld_step_curve_stays_below_ltd_and_touches_at_even_layers() {
    // Full-gain sweep at fixed n1: the linear model's step curve never beats
    // the triangular scheme and meets the bound exactly when both cells see
    // an even number of alignment layers filling the interference span.
    let n1 = 48u32;
    for ni in 0..=24u32 {
        let n2 = n1 - 1;
        let cfg = SymmetricConfig::new(n1, n2, ni);
        if !cfg.to_full().is_weak_strict() {
            continue;
        }
        let ld_rate = ld::ld_achievable_sum_rate(&cfg.to_full()).unwrap();
        let ltd_rate = ltd::allocate_best(&cfg).unwrap().sum_rate();
        assert!(ld_rate <= ltd_rate, "linear beat triangular at ni={ni}");
        let delta = (n1 - n2) as u64;
        if ni > 0 && delta > 0 {
            let layers = ni as u64 / delta;
            if layers.is_multiple_of(2) && (ni as u64).is_multiple_of(delta) {
                let bound = ld::ld_upper_bound(&cfg.to_full()).unwrap();
                assert_eq!(
                    bound.to_f64(),
                    ld_rate as f64,
                    "even-layer point ni={ni} should touch the bound"
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Gaussian per-layer lower bounds and identities
// ---------------------------------------------------------------------------

fn sample_weak_config(rng: &mut SplitMix64) -> GaussConfig {
    loop {
        let log_p = 24.0 + 36.0 * rng.next_f64();
        let beta = 0.6 + 0.35 * rng.next_f64();
        let alpha = 0.05 + 0.45 * rng.next_f64();
        let Ok(cfg) = GaussConfig::symmetric(log_p, alpha, beta) else {
            continue;
        };
        if cfg.is_weak_strict() && cfg.supports_layering() {
            return cfg;
        }
    }
}

#[test]
fn gaussian_layer_bounds_hold_over_random_configs() {
    let mut rng = SplitMix64::new(0x6A55);
    for _ in 0..1000 {
        let cfg = sample_weak_config(&mut rng);
        let rate = gauss::achievable_sum_rate(&cfg).unwrap();
        for lr in &rate.per_layer {
            let q_own = cfg.block(lr.cell);
            let q_other = cfg.block(lr.cell.other());
            match lr.role {
                // Common alignment blocks clear log SNR^(1-beta) - 2.
                LayerRole::Common { .. } => {
                    assert!(
                        lr.rate > q_own - 2.0 - 1e-9,
                        "common layer {:.4} below {:.4} at {cfg:?}",
                        lr.rate,
                        q_own - 2.0
                    );
                }
                // Free interference slots clear the other cell's block
                // size minus one.
                LayerRole::InterferenceSlot { .. } => {
                    assert!(
                        lr.rate > q_other - 1.0 - 1e-9,
                        "slot layer {:.4} below {:.4} at {cfg:?}",
                        lr.rate,
                        q_other - 1.0
                    );
                }
                _ => {}
            }
        }
        assert!(
            rate.raw >= rate.closed_form - 1e-9,
            "raw below closed form at {cfg:?}"
        );
    }
}

#[test]
fn alignment_identity_over_random_configs() {
    let mut rng = SplitMix64::new(0xA116);
    for _ in 0..500 {
        let cfg = sample_weak_config(&mut rng);
        let Ok(l) = cfg.big_l(Cell::One) else {
            continue;
        };
        if l < 1.0 {
            continue;
        }
        let a = gauss::alignment_check(&cfg, Cell::One, 1).unwrap();
        assert!(a.aligned, "alignment identity failed at {cfg:?}");
        assert!(a.separated_at_home);
    }
}

#[test]
fn gaussian_sandwich_and_outer_code() {
    let mut rng = SplitMix64::new(0x5A4D);
    for _ in 0..300 {
        let cfg = sample_weak_config(&mut rng);
        let rate = gauss::achievable_sum_rate(&cfg).unwrap();
        let upper = gauss::gaussian_upper_bound(&cfg).unwrap();
        let streams = rate.per_layer.len() as u32;
        let outer = gauss::outer_code_adjust_sum(rate.raw, streams);
        assert!(outer <= rate.raw + 1e-12);
        assert!(
            rate.raw <= upper + 1e-9,
            "raw {} above upper {upper} at {cfg:?}",
            rate.raw
        );
    }
}

#[test]
fn closed_form_matches_deterministic_rate_at_integer_exponents() {
    // With integer log-SNRs the closed form reproduces the deterministic
    // full-gain expression up to exactly the lattice constants.
    for (n1, n2, ni) in [
        (40u32, 30u32, 20u32),
        (60, 50, 24),
        (36, 30, 12),
        (50, 45, 20),
    ] {
        let cfg = SymmetricConfig::new(n1, n2, ni);
        if !cfg.to_full().is_weak_strict() {
            continue;
        }
        let g = GaussConfig::symmetric(n1 as f64, ni as f64 / n1 as f64, n2 as f64 / n1 as f64)
            .unwrap();
        let closed = gauss::closed_form_sum_rate(&g).unwrap();
        let det = 2 * (n2 - ni) as u64 + 2 * ld::phi(ni as u64, (n1 - n2) as u64);
        let l1 = (g.big_l(Cell::One).unwrap() + 1e-9).floor();
        let l2 = (g.big_l(Cell::Two).unwrap() + 1e-9).floor();
        let constants = 6.0 + 2.5 * (l1 + l2);
        assert!(
            (det as f64 - closed - constants).abs() <= 2.0 + 1e-9,
            "correspondence off at ({n1},{n2},{ni}): det {det} closed {closed}"
        );
    }
}

// ---------------------------------------------------------------------------
// CLI behaviour
// ---------------------------------------------------------------------------

fn run_to_string(args: &[&str]) -> (i32, String) {
    let out = std::env::temp_dir().join(format!(
        "imac_props_{}.csv",
        args.join("_").replace(['/', '.', '-'], "_")
    ));
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    argv.push("--out".into());
    argv.push(out.to_str().unwrap().into());
    let code = cli::run(&argv);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (code, text)
}

#[test]
fn cli_reruns_are_byte_identical() {
    let args = [
        "gdof",
        "--alpha",
        "0,0.25,0.5,0.75,1,1.5,2",
        "--beta",
        "0.8,1.0",
        "--seed",
        "7",
    ];
    let (c1, t1) = run_to_string(&args);
    let (c2, t2) = run_to_string(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(t1, t2);
    assert!(t1.starts_with("# imac "));
    assert!(t1.contains("config_hash="));
}

#[test]
fn cli_verify_passes_and_overpack_fails() {
    let (code, text) = run_to_string(&[
        "verify",
        "--model",
        "ltd",
        "--n1",
        "24",
        "--n2",
        "22",
        "--ni",
        "10",
        "--samples",
        "400",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0, "verify should pass:\n{text}");
    assert!(text.contains("verdict,-,pass,true"));

    let (code, text) = run_to_string(&[
        "verify",
        "--model",
        "ltd",
        "--n1",
        "24",
        "--n2",
        "22",
        "--ni",
        "10",
        "--samples",
        "400",
        "--seed",
        "3",
        "--overpack",
        "8",
    ]);
    assert_eq!(code, 1, "overpacked verify should breach:\n{text}");
    let failing = text
        .lines()
        .filter(|l| l.starts_with("condition,"))
        .filter(|l| l.split(',').nth(5).is_some_and(|m| m.starts_with('-')))
        .count();
    assert!(failing > 0, "expected a negative margin:\n{text}");
}

#[test]
fn cli_rejects_bad_input_with_code_2() {
    assert_eq!(cli::run(&["bogus".to_string()]), 2);
    let args: Vec<String> = ["rate", "--model", "ltd"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(cli::run(&args), 2); // missing config
    let args: Vec<String> = [
        "rate", "--model", "ld", "--n1", "10", "--n2", "4", "--ni", "9",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    assert_eq!(cli::run(&args), 2); // outside the weak regime
}

#[test]
fn cli_gauss_rate_worked_point() {
    let (code, text) = run_to_string(&[
        "gauss-rate",
        "--power",
        "40",
        "--alpha",
        "0.5",
        "--beta",
        "0.75",
    ]);
    assert_eq!(code, 0);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    let fields: Vec<&str> = data[1].split(',').collect();
    let raw: f64 = fields[3].parse().unwrap();
    let upper: f64 = fields[6].parse().unwrap();
    assert!(raw >= 52.0 && raw <= upper);
    assert!((upper - 71.1).abs() < 1e-9);
}
