//! Monte Carlo estimate of the outage-set measure.
//!
//! Allocations passing the decoding conditions at budget delta are
//! guaranteed to decode except on a fine-gain set of measure at most delta.
//! Sampling gain tuples from the dyadic grid at receiver depth puts a number
//! on the actual failure measure; over-packed allocations fail almost
//! everywhere instead.
//!
//!     cargo run --example outage_monte_carlo

use imac::config::SymmetricConfig;
use imac::{ltd, oracle};

fn main() {
    let cfg = SymmetricConfig::new(24, 22, 10);
    let samples = 20_000;
    let seed = 11;
    println!("config {cfg:?}, {samples} samples, seed {seed}");
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "delta", "margin", "outage", "budget"
    );
    for delta in [0.25, 0.5, 1.0] {
        let alloc = ltd::shave_for_decoding(&ltd::allocate(&cfg).unwrap(), &cfg, delta).unwrap();
        let check = ltd::check_decoding(&alloc, &cfg, delta);
        let est = oracle::outage_fraction(&cfg.to_full(), &alloc.levels, samples, seed).unwrap();
        println!(
            "{delta:>6} {:>10.2} {:>10.4} {:>10}",
            check.worst(),
            est.fraction(),
            delta
        );
    }

    // The raw allocation fills the receiver exactly (zero slack in the first
    // condition), so a sizable share of gain tuples leaves it singular.
    let raw = ltd::allocate(&cfg).unwrap();
    let est = oracle::outage_fraction(&cfg.to_full(), &raw.levels, samples, seed).unwrap();
    println!(
        "raw allocation (no decoding slack): outage {:.4}",
        est.fraction()
    );

    // Overfilled level sets: more unknowns than receiver levels can never
    // decode, for any gains.
    let full_cell =
        imac::alloc::CellLevels::new((1..=24).collect(), (1..=22).collect(), 24, 22).unwrap();
    let overfull = imac::alloc::LevelAllocation::symmetric(full_cell);
    let est = oracle::outage_fraction(&cfg.to_full(), &overfull, 2_000, seed).unwrap();
    println!("overfilled level sets: outage {:.4}", est.fraction());
}
