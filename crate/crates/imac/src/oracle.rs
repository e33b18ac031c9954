//! Ground-truth validation of deterministic-model schemes.
//!
//! A level allocation claims that all used bits can be recovered at both
//! receivers. Here that claim is checked directly: assemble the receiver's
//! system matrix over F2 (shifted Toeplitz channel columns restricted to the
//! used levels, interference columns merged since only the interferers' sum
//! is decoded) and test for full column rank. On top of that sit a Monte
//! Carlo estimate of the outage-set measure over fine-gain tuples and an
//! exhaustive best-allocation search at desk scale.

use crate::alloc::{CellLevels, LevelAllocation};
use crate::config::{Cell, ImacConfig, SymmetricConfig};
use crate::error::Error;
use crate::gf2::{gf2_rank, FineGainExpansion, GF2Matrix, GF2Vector};
use crate::rng::SplitMix64;

// ---------------------------------------------------------------------------
// Fine gains
// ---------------------------------------------------------------------------

/// Fine gains of the six effective links: for each receiver, the two own
/// signals and the (already aligned) interference sum.
#[derive(Debug, Clone)]
pub struct ChannelGains {
    /// `rx[k] = [own strong, own weak, interference]` at receiver `k`.
    pub rx: [[FineGainExpansion; 3]; 2],
}

impl ChannelGains {
    /// All expansion bits zero: the linear-deterministic limit.
    pub fn ld_limit(depth: usize) -> Self {
        let g = || FineGainExpansion::ld_limit(depth);
        ChannelGains {
            rx: [[g(), g(), g()], [g(), g(), g()]],
        }
    }

    /// Uniform sample over the dyadic grid at the given depth: each of the
    /// six gains draws its expansion bits independently.
    pub fn sample(depth: usize, rng: &mut SplitMix64) -> Self {
        let mut draw = || {
            let bits: Vec<u8> = (0..depth).map(|_| (rng.next_u64() & 1) as u8).collect();
            FineGainExpansion::from_bits(bits)
        };
        ChannelGains {
            rx: [[draw(), draw(), draw()], [draw(), draw(), draw()]],
        }
    }

    pub fn is_ld_limit(&self) -> bool {
        self.rx.iter().flatten().all(|g| g.is_ld_limit())
    }
}

// ---------------------------------------------------------------------------
// Receiver systems
// ---------------------------------------------------------------------------

/// The linear system one receiver must invert: one column per used bit level
/// of (own strong signal, own weak signal, interference sum).
#[derive(Debug, Clone)]
pub struct ReceiverSystem {
    pub receiver: Cell,
    pub matrix: GF2Matrix,
    pub unknowns: usize,
}

/// Column of the shifted lower-triangular channel map: the signal's bit `j`
/// arrives at level `shift + j` and smears downward with the gain's
/// expansion bits.
fn channel_column(q: usize, shift: usize, gain: &FineGainExpansion, j: usize) -> GF2Vector {
    let pos = shift + j;
    debug_assert!(pos >= 1 && pos <= q);
    let mut col = GF2Vector::zeros(q);
    col.set(pos, true);
    for t in 1..=(q - pos) {
        if gain.bit(t) == 1 {
            col.set(pos + t, true);
        }
    }
    col
}

/// Assemble the system seen at `receiver` for the given allocation and fine
/// gains. The receiver resolves `q = max(own strong gain, interference)`
/// levels; the interference columns cover the union of the other cell's used
/// levels inside its reach, counted once.
pub fn build_receiver_system(
    cfg: &ImacConfig,
    gains: &ChannelGains,
    alloc: &LevelAllocation,
    receiver: Cell,
) -> Result<ReceiverSystem, Error> {
    let n_strong = cfg.strong(receiver) as usize;
    let n_weak = cfg.weakuser(receiver) as usize;
    let inc = cfg.incoming(receiver) as usize;
    let q = n_strong.max(inc).max(1);
    let own = alloc.cell(receiver);
    if own.n_strong() != n_strong || own.n_weak() != n_weak {
        return Err(Error::invalid_dimension(
            "allocation signal lengths do not match the configuration",
        ));
    }
    let [g_own1, g_own2, g_int] = &gains.rx[receiver.index()];
    let mut cols = Vec::new();
    for &j in own.x1_bits() {
        cols.push(channel_column(q, q - n_strong, g_own1, j));
    }
    for &j in own.x2_bits() {
        if j > n_weak {
            return Err(Error::invalid_dimension("weak-user level out of range"));
        }
        cols.push(channel_column(q, q - n_weak, g_own2, j));
    }
    let other = alloc.cell(receiver.other());
    for j in other.footprint(inc) {
        cols.push(channel_column(q, q - inc, g_int, j));
    }
    let unknowns = cols.len();
    let matrix = if cols.is_empty() {
        GF2Matrix::zeros(q, 0)
    } else {
        GF2Matrix::from_columns(&cols)
    };
    Ok(ReceiverSystem {
        receiver,
        matrix,
        unknowns,
    })
}

/// True iff every unknown is recoverable: the system has full column rank.
pub fn is_decodable(sys: &ReceiverSystem) -> bool {
    sys.unknowns == 0 || gf2_rank(&sys.matrix) == sys.unknowns
}

/// Both receivers decodable for this gain tuple?
pub fn decodable_at(
    cfg: &ImacConfig,
    gains: &ChannelGains,
    alloc: &LevelAllocation,
) -> Result<bool, Error> {
    for rx in [Cell::One, Cell::Two] {
        if !is_decodable(&build_receiver_system(cfg, gains, alloc, rx)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Fast mask-based rank path
// ---------------------------------------------------------------------------

/// Echelon accumulator over u128 column masks (receiver dimension <= 128).
struct Echelon {
    pivots: Vec<u128>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { pivots: Vec::new() }
    }

    /// Reduce and insert; returns false when the column was dependent.
    fn insert(&mut self, mut col: u128) -> bool {
        for &p in &self.pivots {
            if col & (1u128 << (127 - p.leading_zeros())) != 0 {
                col ^= p;
            }
        }
        if col == 0 {
            return false;
        }
        self.pivots.push(col);
        // Keep pivots sorted by leading bit so reduction stays one pass.
        self.pivots.sort_unstable_by(|a, b| b.cmp(a));
        true
    }
}

fn column_mask(q: usize, shift: usize, first_col: u128, j: usize) -> u128 {
    let pos = shift + j - 1; // 0-based
    let mask = first_col << pos;
    if q >= 128 {
        mask
    } else {
        mask & ((1u128 << q) - 1)
    }
}

fn first_col_mask(gain: &FineGainExpansion, q: usize) -> u128 {
    let mut m = 1u128;
    for t in 1..q.min(128) {
        if gain.bit(t) == 1 {
            m |= 1 << t;
        }
    }
    m
}

/// Mask-path decodability used by the Monte Carlo loop; agrees with the
/// matrix path (a test pins this) but exits early on dependence.
fn decodable_fast(cfg: &ImacConfig, gains: &ChannelGains, alloc: &LevelAllocation) -> Option<bool> {
    let q_max = [Cell::One, Cell::Two]
        .iter()
        .map(|&rx| (cfg.strong(rx) as usize).max(cfg.incoming(rx) as usize))
        .max()
        .unwrap_or(0);
    if q_max > 128 {
        return None;
    }
    for rx in [Cell::One, Cell::Two] {
        let n_strong = cfg.strong(rx) as usize;
        let n_weak = cfg.weakuser(rx) as usize;
        let inc = cfg.incoming(rx) as usize;
        let q = n_strong.max(inc).max(1);
        let [g1, g2, gi] = &gains.rx[rx.index()];
        let m1 = first_col_mask(g1, q);
        let m2 = first_col_mask(g2, q);
        let mi = first_col_mask(gi, q);
        let own = alloc.cell(rx);
        let mut ech = Echelon::new();
        for &j in own.x1_bits() {
            if !ech.insert(column_mask(q, q - n_strong, m1, j)) {
                return Some(false);
            }
        }
        for &j in own.x2_bits() {
            if !ech.insert(column_mask(q, q - n_weak, m2, j)) {
                return Some(false);
            }
        }
        for j in alloc.cell(rx.other()).footprint(inc) {
            if !ech.insert(column_mask(q, q - inc, mi, j)) {
                return Some(false);
            }
        }
    }
    Some(true)
}

// ---------------------------------------------------------------------------
// Monte Carlo outage
// ---------------------------------------------------------------------------

/// Result of an outage estimation run.
#[derive(Debug, Clone)]
pub struct OutageEstimate {
    pub samples: u64,
    pub failures: u64,
    pub seed: u64,
    pub depth: usize,
}

impl OutageEstimate {
    pub fn fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.failures as f64 / self.samples as f64
        }
    }
}

/// Estimate the measure of fine-gain tuples for which the allocation fails
/// to decode at one of the receivers. Gains are drawn uniformly from the
/// dyadic grid at the receiver depth; results are deterministic for a fixed
/// seed regardless of evaluation order.
pub fn outage_fraction(
    cfg: &ImacConfig,
    alloc: &LevelAllocation,
    samples: u64,
    seed: u64,
) -> Result<OutageEstimate, Error> {
    if samples == 0 {
        return Err(Error::invalid_input("need at least one sample"));
    }
    let q = [Cell::One, Cell::Two]
        .iter()
        .map(|&rx| (cfg.strong(rx) as usize).max(cfg.incoming(rx) as usize))
        .max()
        .unwrap_or(1)
        .max(1);
    let depth = q.saturating_sub(1).max(1);
    let root = SplitMix64::new(seed);
    let mut failures = 0;
    for s in 0..samples {
        let mut rng = root.stream(s);
        let gains = ChannelGains::sample(depth, &mut rng);
        let ok = match decodable_fast(cfg, &gains, alloc) {
            Some(ok) => ok,
            None => decodable_at(cfg, &gains, alloc)?,
        };
        if !ok {
            failures += 1;
        }
    }
    Ok(OutageEstimate {
        samples,
        failures,
        seed,
        depth,
    })
}

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

/// Outcome of the exhaustive best-allocation search.
#[derive(Debug, Clone)]
pub struct BestRate {
    pub bits: usize,
    pub witness: LevelAllocation,
}

/// Largest `n1` the exhaustive search accepts.
pub const EXHAUSTIVE_CAP: u32 = 8;

/// Enumerate every admissible level allocation of a tiny symmetric instance
/// and return the maximum total bit count decodable at both receivers under
/// the given gains.
///
/// The coupling between the cells runs entirely through the interference
/// footprints, so the search enumerates footprint pairs and solves each side
/// by a maximal independent column set (greedy insertion is optimal there).
pub fn exhaustive_best_rate(
    cfg: &SymmetricConfig,
    gains: &ChannelGains,
) -> Result<BestRate, Error> {
    if cfg.n1 > EXHAUSTIVE_CAP {
        return Err(Error::too_large(format!(
            "exhaustive search capped at n1 <= {EXHAUSTIVE_CAP}, got {}",
            cfg.n1
        )));
    }
    let full = cfg.to_full();
    let n1 = cfg.n1 as usize;
    let n2 = cfg.n2 as usize;
    let ni = cfg.ni as usize;
    let q = n1.max(ni).max(1);
    let span = ni.min(n1); // levels a cell can expose to the other receiver
    let masks: Vec<[u128; 3]> = (0..2)
        .map(|k| {
            let [g1, g2, gi] = &gains.rx[k];
            [
                first_col_mask(g1, q),
                first_col_mask(g2, q),
                first_col_mask(gi, q),
            ]
        })
        .collect();

    // Maximum own bits of one cell given its allowed footprint and the
    // incoming unknowns; records the chosen levels.
    let solve_cell =
        |rx: usize, own_foot: u32, incoming: u32| -> Option<(usize, Vec<usize>, Vec<usize>)> {
            let mut ech = Echelon::new();
            for j in 1..=span {
                if (incoming >> (j - 1)) & 1 == 1
                    && !ech.insert(column_mask(q, q - ni, masks[rx][2], j))
                {
                    return None; // footprint itself is not decodable
                }
            }
            let mut x1 = Vec::new();
            let mut x2 = Vec::new();
            for j in 1..=n1 {
                if j <= span && (own_foot >> (j - 1)) & 1 == 0 {
                    continue;
                }
                if ech.insert(column_mask(q, q - n1, masks[rx][0], j)) {
                    x1.push(j);
                }
            }
            for j in 1..=n2 {
                if j <= span && (own_foot >> (j - 1)) & 1 == 0 {
                    continue;
                }
                if ech.insert(column_mask(q, q - n2, masks[rx][1], j)) {
                    x2.push(j);
                }
            }
            Some((x1.len() + x2.len(), x1, x2))
        };

    let mut best: Option<(usize, LevelAllocation)> = None;
    for foot1 in 0u32..(1 << span) {
        for foot2 in 0u32..(1 << span) {
            let Some((bits1, x1a, x2a)) = solve_cell(0, foot1, foot2) else {
                continue;
            };
            let Some((bits2, x1b, x2b)) = solve_cell(1, foot2, foot1) else {
                continue;
            };
            let total = bits1 + bits2;
            if best.as_ref().is_none_or(|(b, _)| total > *b) {
                let c1 = CellLevels::new(x1a, x2a, n1, n2)?;
                let c2 = CellLevels::new(x1b, x2b, n1, n2)?;
                let alloc = LevelAllocation::new(c1, c2);
                debug_assert!(decodable_at(&full, gains, &alloc).unwrap_or(false));
                best = Some((total, alloc));
            }
        }
    }
    let (bits, witness) = best.expect("footprint 0 always solvable");
    Ok(BestRate { bits, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltd;

    fn sym(n1: u32, n2: u32, ni: u32) -> SymmetricConfig {
        SymmetricConfig::new(n1, n2, ni)
    }

    #[test]
    fn empty_allocation_is_decodable() {
        let cfg = sym(6, 5, 2).to_full();
        let alloc = LevelAllocation::symmetric(CellLevels::empty(6, 5));
        let gains = ChannelGains::ld_limit(8);
        let sys = build_receiver_system(&cfg, &gains, &alloc, Cell::One).unwrap();
        assert_eq!(sys.unknowns, 0);
        assert!(is_decodable(&sys));
    }

    #[test]
    fn ld_limit_reproduces_shift_structure() {
        // With all expansion bits zero, each column is a plain unit vector at
        // the shifted position.
        let cfg = sym(12, 11, 4);
        let alloc = ltd::allocate(&cfg).unwrap();
        let gains = ChannelGains::ld_limit(16);
        let sys = build_receiver_system(&cfg.to_full(), &gains, &alloc.levels, Cell::One).unwrap();
        for c in 1..=sys.matrix.cols() {
            let col = sys.matrix.column(c);
            assert_eq!(col.popcount(), 1, "column {c} must be a unit vector");
        }
    }

    #[test]
    fn columns_match_convolution_oracle() {
        // Each column is the convolution of the gain's bit pattern with the
        // unit vector at the shifted level.
        let mut rng = SplitMix64::new(3);
        let q = 8;
        for _ in 0..50 {
            let bits: Vec<u8> = (0..q - 1).map(|_| (rng.next_u64() & 1) as u8).collect();
            let g = FineGainExpansion::from_bits(bits.clone());
            for shift in 0..q {
                for j in 1..=(q - shift) {
                    let col = channel_column(q, shift, &g, j);
                    let mut expect = GF2Vector::zeros(q);
                    for level in 1..=q {
                        // Entry = [g]_{level - (shift+j)} with [g]_0 = 1.
                        let d = level as i64 - (shift + j) as i64;
                        let bit = match d {
                            0 => 1,
                            d if d > 0 => bits.get(d as usize - 1).copied().unwrap_or(0),
                            _ => 0,
                        };
                        if bit == 1 {
                            expect.set(level, true);
                        }
                    }
                    assert_eq!(col, expect, "shift {shift} j {j}");
                }
            }
        }
    }

    #[test]
    fn duplicated_levels_with_identical_gains_fail() {
        // Both own signals on the same level with equal effective columns.
        let cfg = ImacConfig::new(6, 6, 6, 6, 0, 0).unwrap();
        let cell = CellLevels::new(vec![1], vec![1], 6, 6).unwrap();
        let alloc = LevelAllocation::symmetric(cell);
        let gains = ChannelGains::ld_limit(8);
        let sys = build_receiver_system(&cfg, &gains, &alloc, Cell::One).unwrap();
        assert_eq!(sys.unknowns, 2);
        assert!(!is_decodable(&sys));
    }

    #[test]
    fn rank_invariant_under_column_order() {
        let cfg = sym(8, 7, 3);
        let mut rng = SplitMix64::new(9);
        for _ in 0..20 {
            let gains = ChannelGains::sample(7, &mut rng);
            let alloc = ltd::allocate(&cfg).unwrap();
            let sys =
                build_receiver_system(&cfg.to_full(), &gains, &alloc.levels, Cell::Two).unwrap();
            // Permute columns by rebuilding from shuffled column vectors.
            let mut cols: Vec<GF2Vector> = (1..=sys.matrix.cols())
                .map(|c| sys.matrix.column(c))
                .collect();
            for i in (1..cols.len()).rev() {
                let j = rng.next_below(i as u64 + 1) as usize;
                cols.swap(i, j);
            }
            let shuffled = GF2Matrix::from_columns(&cols);
            assert_eq!(gf2_rank(&shuffled), gf2_rank(&sys.matrix));
        }
    }

    #[test]
    fn fast_path_agrees_with_matrix_path() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..60 {
            let n1 = 3 + (rng.next_below(8)) as u32;
            let n2 = n1 - rng.next_below(n1 as u64).min(2) as u32;
            let ni = rng.next_below(2 * n1 as u64 + 1) as u32;
            let cfg = sym(n1, n2.max(1), ni);
            let alloc = ltd::allocate(&cfg).unwrap();
            let gains = ChannelGains::sample((n1.max(ni)) as usize, &mut rng);
            let fast = decodable_fast(&cfg.to_full(), &gains, &alloc.levels).unwrap();
            let slow = decodable_at(&cfg.to_full(), &gains, &alloc.levels).unwrap();
            assert_eq!(fast, slow, "cfg {cfg:?}");
        }
    }

    #[test]
    fn outage_zero_for_empty_allocation() {
        let cfg = sym(8, 8, 3);
        let alloc = LevelAllocation::symmetric(CellLevels::empty(8, 8));
        let est = outage_fraction(&cfg.to_full(), &alloc, 200, 1).unwrap();
        assert_eq!(est.failures, 0);
    }

    #[test]
    fn outage_deterministic_per_seed() {
        let cfg = sym(10, 9, 4);
        let alloc = ltd::allocate(&cfg).unwrap();
        let a = outage_fraction(&cfg.to_full(), &alloc.levels, 500, 42).unwrap();
        let b = outage_fraction(&cfg.to_full(), &alloc.levels, 500, 42).unwrap();
        assert_eq!(a.failures, b.failures);
    }

    #[test]
    fn overpacked_allocation_mostly_fails() {
        // More unknowns than receiver levels cannot decode for any gains.
        let cfg = sym(6, 6, 2);
        let cell = CellLevels::new((1..=6).collect(), (1..=6).collect(), 6, 6).unwrap();
        let alloc = LevelAllocation::symmetric(cell);
        let est = outage_fraction(&cfg.to_full(), &alloc, 200, 7).unwrap();
        assert_eq!(est.fraction(), 1.0);
    }

    #[test]
    fn exhaustive_no_interference_uses_everything() {
        let cfg = sym(3, 3, 0);
        let best = exhaustive_best_rate(&cfg, &ChannelGains::ld_limit(4)).unwrap();
        assert_eq!(best.bits, 6);
    }

    #[test]
    fn exhaustive_respects_cap() {
        assert!(exhaustive_best_rate(&sym(9, 9, 0), &ChannelGains::ld_limit(10)).is_err());
    }

    #[test]
    fn exhaustive_dominates_scheme_when_decodable() {
        let mut rng = SplitMix64::new(23);
        for n1 in 1..=6u32 {
            for n2 in 0..=n1 {
                for ni in 0..=2 * n1 {
                    let cfg = sym(n1, n2, ni);
                    let gains = ChannelGains::sample((n1.max(ni)) as usize, &mut rng);
                    let alloc = ltd::allocate(&cfg).unwrap();
                    if !decodable_at(&cfg.to_full(), &gains, &alloc.levels).unwrap() {
                        continue;
                    }
                    let best = exhaustive_best_rate(&cfg, &gains).unwrap();
                    assert!(
                        best.bits >= alloc.sum_rate() as usize,
                        "oracle lost to scheme at {cfg:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn ltd_gains_never_hurt_versus_ld() {
        // Bit-level dependence can only enlarge the feasible set.
        let mut rng = SplitMix64::new(31);
        let cfg = sym(6, 5, 2);
        let ld_best = exhaustive_best_rate(&cfg, &ChannelGains::ld_limit(8)).unwrap();
        for _ in 0..10 {
            let gains = ChannelGains::sample(6, &mut rng);
            let best = exhaustive_best_rate(&cfg, &gains).unwrap();
            assert!(best.bits >= ld_best.bits);
        }
    }
}
