//! Minimum constellation distance under random fine gains.
//!
//! The Gaussian decoder resolves the triple (own strong, own weak,
//! interference sum); reliability needs the closest competing triple to stay
//! at least 32 noise units away. Rates satisfying the decoding conditions
//! keep the failure fraction under the outage budget; overrunning the
//! interference span collapses the distance for every gain tuple.
//!
//!     cargo run --example min_distance

use imac::config::Cell;
use imac::gauss::{self, DistanceLayout, FineGains, GaussRates};

fn main() {
    let delta = 0.5;
    let cap = 1 << 22;
    let passing = DistanceLayout {
        n1: 24,
        n2: 24,
        ni: 12,
        rates: GaussRates {
            rc11: 2,
            rc12: 2,
            rc21: 2,
            rc22: 2,
            ..Default::default()
        },
        weak: false,
    };
    println!("layout n1=24 n2=24 ni=12, common rates 2 bits each");
    for c in gauss::strong_distance_conditions(&passing, delta) {
        println!(
            "  rx{} condition {}: {:.2} <= {:.2} (margin {:.2})",
            c.cell.index() + 1,
            c.index,
            c.lhs,
            c.rhs,
            c.margin()
        );
    }
    let h = FineGains {
        h: [[1.31, 1.62], [1.17, 1.85], [1.44, 1.09], [1.73, 1.52]],
    };
    let g = gauss::modulate_inputs(&h).unwrap();
    let d = gauss::min_constellation_distance(&passing, &g, Cell::One, cap).unwrap();
    println!("  distance at one sampled gain tuple: {d:.1}");
    let frac = gauss::distance_outage(&passing, 500, 77, cap).unwrap();
    println!("  fraction of 500 samples with d < 32: {frac:.3}");
    println!();

    let violating = DistanceLayout {
        n1: 24,
        n2: 24,
        ni: 12,
        rates: GaussRates {
            rc11: 2,
            rc12: 1,
            rc21: 10,
            ..Default::default()
        },
        weak: false,
    };
    let c1 = &gauss::strong_distance_conditions(&violating, delta)[0];
    println!(
        "interference rate 10 over a 12-level span: condition 1 violated by {:.2} bits",
        c1.lhs - c1.rhs
    );
    let frac = gauss::distance_outage(&violating, 500, 77, cap).unwrap();
    println!("  fraction of 500 samples with d < 32: {frac:.3}");
}
