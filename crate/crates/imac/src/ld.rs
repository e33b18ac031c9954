//! Linear-deterministic model: block alignment and the weak-interference
//! sum-rate machinery.
//!
//! In this model the fine gain is approximated by one, so every used level of
//! one signal must stay orthogonal to every other signal at both receivers.
//! A cell's rate beyond the interference-free part comes from placing its two
//! users' common parts so they align pairwise at the other receiver; `phi`
//! counts how many bit levels that pattern wins over the interference span.

use crate::alloc::{CellLevels, LevelAllocation};
use crate::config::{Cell, ImacConfig, SymmetricConfig};
use crate::error::Error;
use crate::gf2::GF2Vector;
use crate::rat::Rat;

/// Layer count `l(p, q) = floor(p / q)`, with `l(p, 0) = 0`.
pub fn layer_count(p: u64, q: u64) -> u64 {
    p.checked_div(q).unwrap_or(0)
}

/// Multi-user gain over an interference span of `p` levels with block size `q`:
/// `q + l*q/2` when `l(p,q)` is even, `p - (l-1)*q/2` when odd. Both branches
/// are exact integers. Callers never invoke `q > p` in any scheme here; the
/// formula still evaluates (to `q`) in that region.
pub fn phi(p: u64, q: u64) -> u64 {
    let l = layer_count(p, q);
    if l.is_multiple_of(2) {
        q + l * q / 2
    } else {
        p - (l - 1) * q / 2
    }
}

/// Real-valued variant used on log-SNR spans in the Gaussian transfer.
pub fn phi_f64(p: f64, q: f64) -> f64 {
    let l = if q > 0.0 { (p / q).floor() } else { 0.0 };
    if (l as i64) % 2 == 0 {
        q + l * q / 2.0
    } else {
        p - (l - 1.0) * q / 2.0
    }
}

// ---------------------------------------------------------------------------
// Assignment vectors
// ---------------------------------------------------------------------------

/// Order in which interference-span positions receive ones: even-numbered
/// blocks first, then the remainder block, then the odd-numbered blocks
/// (reversed, bottom-up, when the block count is odd).
pub fn fill_order(n: usize, delta: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    if delta == 0 {
        // Degenerate single remainder block.
        return (1..=n).collect();
    }
    let l = n / delta;
    let block =
        |b: usize| -> std::ops::RangeInclusive<usize> { ((b - 1) * delta + 1)..=(b * delta) };
    let mut order = Vec::with_capacity(n);
    let mut b = 2;
    while b <= l {
        order.extend(block(b));
        b += 2;
    }
    order.extend(l * delta + 1..=n);
    if l.is_multiple_of(2) {
        let mut b = 1;
        while b <= l {
            order.extend(block(b));
            b += 2;
        }
    } else {
        let mut b = l;
        loop {
            order.extend(block(b).rev());
            if b == 1 {
                break;
            }
            b -= 2;
        }
    }
    debug_assert_eq!(order.len(), n);
    order
}

/// Overlap count `gamma1(a)^T gamma2(a)` for block size `delta`.
pub fn rho_of(a: &GF2Vector, delta: usize) -> u64 {
    let n = a.len();
    let gamma = |i: usize| -> bool { !a.get(i) };
    let mut rho = 0u64;
    for i in delta + 1..=n {
        if gamma(i) && gamma(i - delta) {
            rho += 1;
        }
    }
    let tail_start = n.saturating_sub(delta) + 1;
    for i in tail_start..=n {
        if gamma(i) {
            rho += 1;
        }
    }
    rho
}

/// An assignment vector `a` over the interference span, together with its
/// block size. `gamma1 = [1-a; 1_delta]` marks the strong user's usable
/// levels, `gamma2 = [0_delta; 1-a]` the weak user's shifted copy.
#[derive(Debug, Clone)]
pub struct AssignmentVector {
    a: GF2Vector,
    delta: usize,
}

impl AssignmentVector {
    pub fn a(&self) -> &GF2Vector {
        &self.a
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn popcount(&self) -> usize {
        self.a.popcount()
    }

    pub fn gamma1(&self) -> GF2Vector {
        let n = self.a.len();
        let mut v = GF2Vector::zeros(n + self.delta);
        for i in 1..=n {
            if !self.a.get(i) {
                v.set(i, true);
            }
        }
        for i in n + 1..=n + self.delta {
            v.set(i, true);
        }
        v
    }

    pub fn gamma2(&self) -> GF2Vector {
        let n = self.a.len();
        let mut v = GF2Vector::zeros(n + self.delta);
        for i in 1..=n {
            if !self.a.get(i) {
                v.set(self.delta + i, true);
            }
        }
        v
    }

    pub fn rho(&self) -> u64 {
        rho_of(&self.a, self.delta)
    }
}

/// Construct the optimal assignment vector with `x` ones over a span of `n`
/// levels in blocks of `delta`. Its overlap count attains the minimum of
/// `gamma1^T gamma2` over all vectors of the same popcount.
pub fn ld_assignment_vector(n: usize, delta: usize, x: usize) -> Result<AssignmentVector, Error> {
    if x > n {
        return Err(Error::infeasible(format!("popcount {x} exceeds span {n}")));
    }
    let order = fill_order(n, delta);
    let mut a = GF2Vector::zeros(n);
    for &pos in order.iter().take(x) {
        a.set(pos, true);
    }
    Ok(AssignmentVector { a, delta })
}

// ---------------------------------------------------------------------------
// Weak-interference rates
// ---------------------------------------------------------------------------

/// Strength class of a cell's weaker user, which decides how much multi-user
/// gain the cell contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdSubcase {
    /// Weaker user reaches at most the private part; cell falls back to the
    /// interference-channel rate.
    IcLimited,
    /// Weaker user reaches into the alignment region; gain grows with `n12`.
    RisingGain,
    /// Weaker user strong enough for the full multi-user gain.
    FullGain,
}

fn require_weak(cfg: &ImacConfig) -> Result<(), Error> {
    if !cfg.is_weak_strict() {
        return Err(Error::regime(format!(
            "interference sum {} exceeds weakest direct link {}; outside the weak regime",
            cfg.i21 + cfg.i12,
            cfg.n12.min(cfg.n22)
        )));
    }
    Ok(())
}

/// Classify a cell by how far its weaker user's gain reaches relative to the
/// incoming interference. A cell with no incoming interference is trivially
/// full-gain: there is nothing to align against and `phi(0, .) = 0`.
pub fn ld_subcase(cfg: &ImacConfig, cell: Cell) -> LdSubcase {
    let n_strong = cfg.strong(cell) as i64;
    let n_weak = cfg.weakuser(cell) as i64;
    let inc = cfg.incoming(cell) as i64;
    if inc == 0 {
        LdSubcase::FullGain
    } else if n_weak <= n_strong - inc {
        LdSubcase::IcLimited
    } else if 2 * n_weak <= 2 * n_strong - inc {
        LdSubcase::RisingGain
    } else {
        LdSubcase::FullGain
    }
}

/// Per-cell contribution to the achievable sum rate. Full-gain cells follow
/// the `phi` expression; the other classes use the corresponding
/// lower-triangular case-I allocations, which the linear model can also
/// realize (their level sets stay disjoint).
pub fn ld_cell_rate(cfg: &ImacConfig, cell: Cell) -> u64 {
    let n_strong = cfg.strong(cell) as u64;
    let n_weak = cfg.weakuser(cell) as u64;
    let inc = cfg.incoming(cell) as u64;
    let out = cfg.outgoing(cell) as u64;
    match ld_subcase(cfg, cell) {
        LdSubcase::FullGain => n_weak - inc + phi(inc, cfg.delta(cell) as u64),
        LdSubcase::IcLimited | LdSubcase::RisingGain => {
            let rc1 = out / 2;
            let rc2 = (out.div_ceil(2)).min(n_weak.saturating_sub(n_strong - out));
            let rp1 = inc / 2;
            let rp2 = n_strong - out - inc;
            rc1 + rc2 + rp1 + rp2
        }
    }
}

/// Achievable sum rate in the weak regime (both cells combined).
pub fn ld_achievable_sum_rate(cfg: &ImacConfig) -> Result<u64, Error> {
    require_weak(cfg)?;
    Ok(ld_cell_rate(cfg, Cell::One) + ld_cell_rate(cfg, Cell::Two))
}

/// Weak-regime upper bound `n11 + n21 - i12/2 - i21/2`, kept exact.
pub fn ld_upper_bound(cfg: &ImacConfig) -> Result<Rat, Error> {
    require_weak(cfg)?;
    Ok(Rat::int(cfg.n11 as i64 + cfg.n21 as i64) - Rat::new(cfg.i12 as i64 + cfg.i21 as i64, 2))
}

// ---------------------------------------------------------------------------
// Explicit level placement (symmetric, full gain)
// ---------------------------------------------------------------------------

/// Materialize the alignment scheme as per-signal level sets for a symmetric
/// weak configuration. The sets are pairwise disjoint at both receivers, so
/// the allocation decodes even in the linear-deterministic limit; its total
/// is the full-gain expression `2 (n2 - ni + phi(ni, delta))`, which matches
/// the achievable sum rate whenever the weaker user carries full gain.
pub fn ld_symmetric_level_allocation(cfg: &SymmetricConfig) -> Result<LevelAllocation, Error> {
    let full = cfg.to_full();
    require_weak(&full)?;
    let n1 = cfg.n1 as usize;
    let n2 = cfg.n2 as usize;
    let ni = cfg.ni as usize;
    let delta = n1 - n2;

    // Best popcount for the constructed assignment.
    let mut best: Option<(i64, usize)> = None;
    for x in 0..=ni {
        let av = ld_assignment_vector(ni, delta, x)?;
        let rate = n2 as i64 + delta as i64 - x as i64 - av.rho() as i64;
        if best.is_none_or(|(r, _)| rate > r) {
            best = Some((rate, x));
        }
    }
    let (_, x) = best.expect("span iterated");
    let av = ld_assignment_vector(ni, delta, x)?;
    let gamma: Vec<usize> = (1..=ni).filter(|&i| !av.a().get(i)).collect();

    let mut x1: Vec<usize> = gamma.clone();
    x1.extend(ni + 1..=ni + delta);
    x1.extend((1..=ni).filter(|&i| av.a().get(i)).map(|i| n1 - ni + i));

    // Weak user's aligned common bits, dropping levels its own receiver
    // already spends on the strong user.
    let keep = |j: usize| -> bool {
        let t = delta + j;
        t <= ni && !gamma.contains(&t)
    };
    let mut x2: Vec<usize> = gamma.iter().copied().filter(|&j| keep(j)).collect();
    x2.extend(ni + 1..=n2.saturating_sub(ni));

    let cell = CellLevels::new(x1, x2, n1, n2)?;
    Ok(LevelAllocation::symmetric(cell))
}
