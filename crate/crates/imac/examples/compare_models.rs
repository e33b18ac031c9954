//! Linear vs lower-triangular achievable rates on the same channel.
//!
//! The linear model forces orthogonal bit levels, so its alignment scheme
//! plateaus between the points where the interference span splits evenly
//! into gain-difference blocks. The triangular model overlaps levels and
//! rides the upper bound instead. Run with:
//!
//!     cargo run --example compare_models

use imac::config::SymmetricConfig;
use imac::{ld, ltd};

fn main() {
    // The worked instance: n1 = 11*D, n2 = 10*D, ni = 5*D with D = 2.
    let cfg = SymmetricConfig::new(22, 20, 10);
    let ld_rate = ld::ld_achievable_sum_rate(&cfg.to_full()).unwrap();
    let ltd_rate = ltd::allocate_best(&cfg).unwrap().sum_rate();
    let bound = ltd::upper_bounds(&cfg).min();
    println!("n1=22 n2=20 ni=10 (16D vs 17D instance)");
    println!("  linear achievable      : {ld_rate}");
    println!("  triangular achievable  : {ltd_rate}");
    println!("  upper bound            : {bound}");
    println!();

    // Sweep the interference level at fixed direct gains: the step curve.
    let (n1, n2) = (40u32, 38u32);
    println!("interference sweep at n1={n1}, n2={n2}");
    println!(
        "{:>4} {:>8} {:>8} {:>8} {:>6}",
        "ni", "linear", "triang", "bound", "touch"
    );
    for ni in (0..=18).step_by(2) {
        let cfg = SymmetricConfig::new(n1, n2, ni);
        if !cfg.to_full().is_weak_strict() {
            continue;
        }
        let ld_rate = ld::ld_achievable_sum_rate(&cfg.to_full()).unwrap();
        let ltd_rate = ltd::allocate_best(&cfg).unwrap().sum_rate();
        let bound = ltd::upper_bounds(&cfg).min();
        let touch = if bound.to_f64() == ld_rate as f64 {
            "yes"
        } else {
            ""
        };
        println!(
            "{ni:>4} {ld_rate:>8} {ltd_rate:>8} {:>8} {touch:>6}",
            bound.to_string()
        );
    }
}
