//! Optimal level-assignment vectors for the linear alignment scheme.
//!
//! Over an interference span of n levels in blocks of delta, the scheme
//! distributes ones so the two users' shifted usable patterns overlap as
//! little as possible. The construction attains the exhaustive minimum of
//! the overlap count for every popcount; the best popcount yields the
//! multi-user gain phi(n, delta).
//!
//!     cargo run --example assignment_vectors

use imac::gf2::GF2Vector;
use imac::ld;

fn exhaustive_min(n: usize, delta: usize, x: usize) -> u64 {
    let mut best = u64::MAX;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != x {
            continue;
        }
        let mut a = GF2Vector::zeros(n);
        for i in 0..n {
            if (mask >> i) & 1 == 1 {
                a.set(i + 1, true);
            }
        }
        best = best.min(ld::rho_of(&a, delta));
    }
    best
}

fn main() {
    let (n, delta) = (10usize, 3usize);
    println!(
        "span n={n}, block delta={delta}   (phi = {})",
        ld::phi(n as u64, delta as u64)
    );
    println!(
        "{:>3} {:>12} {:>6} {:>6} {:>8}",
        "x", "a", "rho", "min", "rate"
    );
    let mut best_rate = 0i64;
    for x in 0..=n {
        let av = ld::ld_assignment_vector(n, delta, x).unwrap();
        let bits: String = av
            .a()
            .iter_bits()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        let rho = av.rho();
        let rate = 2 * n as i64 + delta as i64 - x as i64 - rho as i64;
        best_rate = best_rate.max(rate);
        println!(
            "{x:>3} {bits:>12} {rho:>6} {:>6} {rate:>8}",
            exhaustive_min(n, delta, x)
        );
    }
    println!(
        "best span rate {best_rate} = n + phi(n, delta) = {}",
        n as u64 + ld::phi(n as u64, delta as u64)
    );
}
