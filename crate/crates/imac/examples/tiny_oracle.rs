//! Exhaustive best-rate search at desk scale.
//!
//! For channels with at most eight levels the oracle enumerates every
//! admissible level allocation (coupling the two cells through their
//! interference footprints) and reports the best total decodable at both
//! receivers. The scheme's allocation never beats it.
//!
//!     cargo run --example tiny_oracle

use imac::config::SymmetricConfig;
use imac::oracle::{self, ChannelGains};
use imac::rng::SplitMix64;
use imac::{ld, ltd};

fn main() {
    let mut rng = SplitMix64::new(99);
    println!(
        "{:>12} {:>7} {:>7} {:>7} {:>9}",
        "(n1,n2,ni)", "scheme", "linear", "oracle", "oracleLTD"
    );
    for (n1, n2, ni) in [(6, 5, 2), (6, 6, 2), (6, 5, 4), (5, 4, 2), (6, 4, 8)] {
        let cfg = SymmetricConfig::new(n1, n2, ni);
        let ld_gains = ChannelGains::ld_limit((n1.max(ni)) as usize);
        let best_ld = oracle::exhaustive_best_rate(&cfg, &ld_gains).unwrap();
        let gains = ChannelGains::sample((n1.max(ni)) as usize, &mut rng);
        let best_ltd = oracle::exhaustive_best_rate(&cfg, &gains).unwrap();
        let scheme = ltd::allocate_best(&cfg).unwrap().sum_rate();
        let linear = ld::ld_achievable_sum_rate(&cfg.to_full())
            .map(|r| r.to_string())
            .unwrap_or_else(|_| "-".into());
        println!(
            "{:>12} {scheme:>7} {linear:>7} {:>7} {:>9}",
            format!("({n1},{n2},{ni})"),
            best_ld.bits,
            best_ltd.bits
        );
    }
    println!();
    println!("oracle   = exhaustive best under linear-limit gains");
    println!("oracleLTD = exhaustive best under one random dyadic gain tuple");
}
