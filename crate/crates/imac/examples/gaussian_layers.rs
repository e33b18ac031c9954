//! Lattice power layers and per-level rates for the Gaussian channel.
//!
//! At P = 2^40 with interference exponent 0.5 and weak-user exponent 0.75,
//! the power splits into four layers per cell; the third carries the aligned
//! interference and stays silent, the rest carry lattice codewords whose
//! rates follow the successive-decoding bounds.
//!
//!     cargo run --example gaussian_layers

use imac::config::Cell;
use imac::gauss::{self, GaussConfig};

fn main() {
    let cfg = GaussConfig::symmetric(40.0, 0.5, 0.75).unwrap();
    let part = gauss::power_partition(&cfg, Cell::One).unwrap();
    println!("power partition, cell 1 (log2 windows):");
    for (i, layer) in part.layers.iter().enumerate() {
        println!(
            "  level {}: ({:>5.1}, {:>5.1}]  {:?}",
            i + 1,
            layer.log_lo,
            layer.log_hi,
            layer.role
        );
    }
    println!("  telescoped power: 2^40 - 1 = {:.6e}", part.total_power());
    println!();

    let rate = gauss::achievable_sum_rate(&cfg).unwrap();
    println!("per-level rates, cell 1:");
    for lr in rate.per_layer.iter().filter(|l| l.cell == Cell::One) {
        match lr.align_cap {
            Some(cap) => println!(
                "  {:?}: direct {:.3}, alignment cap {:.3} -> {:.3}",
                lr.role, lr.direct, cap, lr.rate
            ),
            None => println!("  {:?}: direct {:.3}", lr.role, lr.direct),
        }
    }
    println!();
    println!("raw sum rate      : {:.3}", rate.raw);
    println!("closed-form bound : {:.3}", rate.closed_form);
    println!(
        "outer-code rate   : {:.3}",
        gauss::outer_code_adjust_sum(rate.raw, rate.per_layer.len() as u32)
    );
    println!(
        "upper bound       : {:.3}",
        gauss::gaussian_upper_bound(&cfg).unwrap()
    );

    let align = gauss::alignment_check(&cfg, Cell::One, 1).unwrap();
    println!();
    println!(
        "alignment of pair (1,2) at the unintended receiver: {:.4e} vs {:.4e} ({})",
        align.from_strong,
        align.from_weak,
        if align.aligned {
            "aligned"
        } else {
            "NOT aligned"
        }
    );
}
