//! Bit allocations across the whole interference range.
//!
//! For a fixed direct-gain pair the interference level sweeps through every
//! regime; each row shows the classified case, the per-cell rate split, the
//! raw sum rate against the bound minimum, and the worst decoding margin of
//! the shaved allocation at delta = 1/2.
//!
//!     cargo run --example regime_allocations

use imac::config::SymmetricConfig;
use imac::ltd;

fn main() {
    let delta = 0.5;
    let (n1, n2) = (60u32, 52u32);
    println!("n1={n1} n2={n2}, delta={delta}");
    println!(
        "{:>4} {:>5} {:>8} {:>22} {:>5} {:>7} {:>7}",
        "ni", "alpha", "regime", "rc1/rc2/rp1/rp2", "sum", "bound", "margin"
    );
    for ni in (0..=120).step_by(6) {
        let cfg = SymmetricConfig::new(n1, n2, ni);
        let alloc = ltd::allocate_best(&cfg).unwrap();
        let bound = ltd::upper_bounds(&cfg).min();
        let shaved = ltd::shave_for_decoding(&alloc, &cfg, delta).unwrap();
        let check = ltd::check_decoding(&shaved, &cfg, delta);
        let s = alloc.split(imac::Cell::One);
        println!(
            "{ni:>4} {:>5.2} {:>8} {:>22} {:>5} {:>7} {:>7.1}",
            cfg.alpha(),
            alloc.regime.to_string(),
            format!("{}/{}/{}/{}", s.rc1, s.rc2, s.rp1, s.rp2),
            alloc.sum_rate(),
            bound.to_string(),
            check.worst(),
        );
    }
}
