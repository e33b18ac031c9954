//! Lower-triangular-deterministic model: regime classification, bit
//! allocations for the whole interference range, decoding-condition margins,
//! the five-way upper bound, and constant-gap reports.
//!
//! Unlike the linear model, bit levels here need not stay orthogonal: the
//! fine-gain expansion makes overlapping allocations decodable for almost
//! every gain tuple, up to an outage set of measure `delta` controlled by the
//! decoding conditions. Rates are reported raw (the formulas with their
//! floors) and guaranteed (raw minus the decoding slack `2*log2(128/delta)`).

use crate::alloc::{CellLevels, LevelAllocation};
use crate::config::{Cell, ImacConfig, SymmetricConfig};
use crate::error::Error;
use crate::rat::Rat;

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

/// Interference regime and sub-case. Major cases split the interference ratio
/// `alpha = ni/n1` at 1/2, 3/5, 2/3, 3/4, 1 and 3/2; sub-cases split on the
/// weaker user's strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(clippy::upper_case_acronyms)] // Roman-numeral case names
pub enum Regime {
    I1,
    I2,
    I3,
    II1,
    II2,
    IIIA1,
    IIIA2,
    IIIA3,
    IIIB1,
    IIIB2,
    IIIB3,
    IIIB4,
    IIIC1,
    IIIC2,
    IV1,
    IV2,
    V11,
    V12,
    V2,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::I1 => "I.1",
            Regime::I2 => "I.2",
            Regime::I3 => "I.3",
            Regime::II1 => "II.1",
            Regime::II2 => "II.2",
            Regime::IIIA1 => "III.A.1",
            Regime::IIIA2 => "III.A.2",
            Regime::IIIA3 => "III.A.3",
            Regime::IIIB1 => "III.B.1",
            Regime::IIIB2 => "III.B.2",
            Regime::IIIB3 => "III.B.3",
            Regime::IIIB4 => "III.B.4",
            Regime::IIIC1 => "III.C.1",
            Regime::IIIC2 => "III.C.2",
            Regime::IV1 => "IV.1",
            Regime::IV2 => "IV.2",
            Regime::V11 => "V.1.1",
            Regime::V12 => "V.1.2",
            Regime::V2 => "V.2",
        }
    }

    /// True for the weak-interference major case (alpha <= 1/2).
    pub fn is_weak(&self) -> bool {
        matches!(self, Regime::I1 | Regime::I2 | Regime::I3)
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(clippy::upper_case_acronyms)] // Roman-numeral case names
enum MajorCase {
    I,
    II,
    IIIAB,
    IIIC,
    IV,
    V,
}

fn major_case(n1: u64, ni: u64) -> MajorCase {
    if 2 * ni <= n1 {
        MajorCase::I
    } else if 5 * ni < 3 * n1 {
        MajorCase::II
    } else if 4 * ni <= 3 * n1 {
        MajorCase::IIIAB
    } else if ni <= n1 {
        MajorCase::IIIC
    } else if 2 * ni <= 3 * n1 {
        MajorCase::IV
    } else {
        MajorCase::V
    }
}

/// Classify a symmetric configuration into its regime and sub-case.
pub fn classify_regime(cfg: &SymmetricConfig) -> Regime {
    let (n1, n2, ni) = (cfg.n1 as u64, cfg.n2 as u64, cfg.ni as u64);
    if n1 == 0 {
        return Regime::I1;
    }
    match major_case(n1, ni) {
        MajorCase::I => {
            if n2 + ni <= n1 {
                Regime::I1
            } else if 2 * n2 + ni <= 2 * n1 {
                Regime::I2
            } else {
                Regime::I3
            }
        }
        MajorCase::II => {
            if n2 >= ni + (n1 - ni) / 2 {
                Regime::II1
            } else {
                Regime::II2
            }
        }
        MajorCase::IIIAB => {
            let part_a = 3 * ni <= 2 * n1;
            if 3 * n2 + ni >= 3 * n1 {
                if part_a {
                    Regime::IIIA1
                } else {
                    Regime::IIIB1
                }
            } else if n2 > ni {
                if part_a {
                    Regime::IIIA2
                } else {
                    Regime::IIIB2
                }
            } else if part_a {
                Regime::IIIA3
            } else if 3 * n2 >= 2 * ni {
                Regime::IIIB3
            } else {
                Regime::IIIB4
            }
        }
        MajorCase::IIIC => {
            if 3 * n2 + 2 * ni >= 3 * n1 {
                Regime::IIIC1
            } else {
                Regime::IIIC2
            }
        }
        MajorCase::IV => {
            if 3 * n2 >= ni {
                Regime::IV1
            } else {
                Regime::IV2
            }
        }
        MajorCase::V => {
            if n2 >= n1 / 2 {
                Regime::V11
            } else if 2 * n1 < ni + n2 {
                Regime::V12
            } else {
                Regime::V2
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Allocations
// ---------------------------------------------------------------------------

/// Per-cell rate split: common rates of the two users, plus the strong user's
/// two private parts. `rp2` (the part between the common zone and the deep
/// private zone) is only ever nonzero in the weak regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateSplit {
    pub rc1: u64,
    pub rc2: u64,
    pub rp1: u64,
    pub rp2: u64,
}

impl RateSplit {
    pub fn cell_sum(&self) -> u64 {
        self.rc1 + self.rc2 + self.rp1 + self.rp2
    }
}

/// A complete bit allocation with its regime label and materialized level
/// sets.
#[derive(Debug, Clone)]
pub struct LtdAllocation {
    pub regime: Regime,
    pub cells: [RateSplit; 2],
    pub levels: LevelAllocation,
}

impl LtdAllocation {
    pub fn sum_rate(&self) -> u64 {
        self.cells.iter().map(|c| c.cell_sum()).sum()
    }

    pub fn split(&self, cell: Cell) -> &RateSplit {
        &self.cells[cell.index()]
    }

    /// Raw rate minus the decoding slack, floored at zero.
    pub fn guaranteed_rate(&self, delta: f64) -> f64 {
        (self.sum_rate() as f64 - gap_guarantee(delta)).max(0.0)
    }
}

fn sat(a: u64, b: u64) -> u64 {
    a.saturating_sub(b)
}

/// Weak-regime split for one cell (valid whenever `out + in <= n_strong`).
fn weak_cell_split(n_strong: u64, n_weak: u64, out: u64, inc: u64) -> RateSplit {
    RateSplit {
        rc1: out / 2,
        rc2: out.div_ceil(2).min(sat(n_weak, n_strong - out)),
        rp1: inc / 2,
        rp2: n_strong - out - inc,
    }
}

fn symmetric_split(n1: u64, n2: u64, ni: u64, case: MajorCase) -> RateSplit {
    match case {
        MajorCase::I => weak_cell_split(n1, n2, ni, ni),
        MajorCase::II => {
            let h = (n1 - ni) / 2;
            RateSplit {
                rc1: h,
                rc2: h.min(sat(n2, ni)),
                rp1: ni - h,
                rp2: 0,
            }
        }
        MajorCase::IIIAB => {
            let t = ni / 3;
            if n2 + ni <= n1 {
                // Weak user below the private part: no multi-user gain, fall
                // back to interference-channel scheduling with the strong
                // user alone. The common rate stays inside the part of the
                // signal the other receiver can absorb.
                let rc1 = if 3 * ni <= 2 * n1 {
                    sat(2 * ni, n1)
                } else {
                    t + ni / 6
                };
                return RateSplit {
                    rc1,
                    rc2: 0,
                    rp1: n1 - ni,
                    rp2: 0,
                };
            }
            // Extra strong-user allocation when the weak user cannot fill the
            // space between the interference and the private part. Half of
            // any overlap with the aligned interference is usable.
            let extra_gap = sat(2 * ni, 3 * n2) / 3;
            let extra_cap = (2 * sat(3 * n1, 4 * ni) + 3 * sat(2 * ni, n2 + n1)) / 6;
            let rc2_fill = (3 * sat(n2, ni) + sat(5 * ni, 3 * n1)) / 3;
            RateSplit {
                rc1: t + extra_gap.min(extra_cap),
                rc2: t.min(rc2_fill).min(sat(n2, n1 - ni)),
                rp1: n1 - ni,
                rp2: 0,
            }
        }
        MajorCase::IIIC => {
            let t = ni / 3;
            let u = sat(n2, n1 - ni);
            let rc2 = t.min(u);
            RateSplit {
                rc1: t + sat(ni, 3 * u) / 6,
                rc2,
                rp1: n1 - ni,
                rp2: 0,
            }
        }
        MajorCase::IV => {
            let t = ni / 3;
            RateSplit {
                rc1: t + sat(ni, 3 * n2) / 6,
                rc2: t.min(n2),
                rp1: 0,
                rp2: 0,
            }
        }
        MajorCase::V => {
            if n2 >= n1 / 2 {
                RateSplit {
                    rc1: n1 / 2,
                    rc2: n1 / 2,
                    rp1: 0,
                    rp2: 0,
                }
            } else if 2 * n1 < ni + n2 {
                RateSplit {
                    rc1: n1 - n2,
                    rc2: n2,
                    rp1: 0,
                    rp2: 0,
                }
            } else {
                RateSplit {
                    rc1: (ni - n2) / 2,
                    rc2: n2,
                    rp1: 0,
                    rp2: 0,
                }
            }
        }
    }
}

/// Materialize level sets: common parts at the top of each signal, `rp2`
/// directly below the outgoing-interference reach, `rp1` at the very bottom.
fn cell_levels(
    split: &RateSplit,
    n_strong: u64,
    n_weak: u64,
    out: u64,
) -> Result<CellLevels, Error> {
    let mut x1: Vec<usize> = (1..=split.rc1 as usize).collect();
    x1.extend((out as usize + 1)..=(out + split.rp2) as usize);
    x1.extend(((n_strong - split.rp1) as usize + 1)..=n_strong as usize);
    let x2: Vec<usize> = (1..=split.rc2 as usize).collect();
    CellLevels::new(x1, x2, n_strong as usize, n_weak as usize)
}

fn build_symmetric(
    cfg: &SymmetricConfig,
    case: MajorCase,
    regime: Regime,
) -> Result<LtdAllocation, Error> {
    let (n1, n2, ni) = (cfg.n1 as u64, cfg.n2 as u64, cfg.ni as u64);
    let split = symmetric_split(n1, n2, ni, case);
    let cell = cell_levels(&split, n1, n2, ni.min(n1))?;
    Ok(LtdAllocation {
        regime,
        cells: [split, split],
        levels: LevelAllocation::symmetric(cell),
    })
}

/// Allocation for the classified regime of a symmetric configuration.
pub fn allocate(cfg: &SymmetricConfig) -> Result<LtdAllocation, Error> {
    let regime = classify_regime(cfg);
    let case = major_case(cfg.n1 as u64, cfg.ni as u64);
    build_symmetric(cfg, case, regime)
}

/// Allocation at regime breakpoints: adjacent cases agree there up to floors,
/// so both are evaluated and the larger sum is returned.
pub fn allocate_best(cfg: &SymmetricConfig) -> Result<LtdAllocation, Error> {
    let base = allocate(cfg)?;
    let (n1, ni) = (cfg.n1 as u64, cfg.ni as u64);
    if n1 == 0 {
        return Ok(base);
    }
    // alpha = 2/3 separates III.A from III.B, which share one allocator.
    let adjacent = if 2 * ni == n1 || 5 * ni == 3 * n1 {
        Some(MajorCase::II)
    } else if 4 * ni == 3 * n1 {
        Some(MajorCase::IIIC)
    } else if ni == n1 {
        Some(MajorCase::IV)
    } else if 2 * ni == 3 * n1 {
        Some(MajorCase::V)
    } else {
        None
    };
    if let Some(case) = adjacent {
        let alt = build_symmetric(cfg, case, base.regime)?;
        if alt.sum_rate() > base.sum_rate() {
            return Ok(alt);
        }
    }
    Ok(base)
}

/// Per-cell weak-interference allocation for a possibly asymmetric
/// configuration. Only the weak regime supports asymmetry; anything stronger
/// is rejected rather than guessed.
pub fn allocate_weak_asymmetric(cfg: &ImacConfig) -> Result<LtdAllocation, Error> {
    if !cfg.is_weak() {
        return Err(Error::regime(
            "asymmetric allocation requires the weak regime (i21 + i12 <= min(n11, n21))",
        ));
    }
    let mut splits = [RateSplit {
        rc1: 0,
        rc2: 0,
        rp1: 0,
        rp2: 0,
    }; 2];
    let mut cells = Vec::with_capacity(2);
    for cell in [Cell::One, Cell::Two] {
        let n_strong = cfg.strong(cell) as u64;
        let n_weak = cfg.weakuser(cell) as u64;
        let out = cfg.outgoing(cell) as u64;
        let inc = cfg.incoming(cell) as u64;
        let split = weak_cell_split(n_strong, n_weak, out, inc);
        splits[cell.index()] = split;
        cells.push(cell_levels(&split, n_strong, n_weak, out)?);
    }
    let regime = cfg
        .as_symmetric()
        .map(|s| classify_regime(&s))
        .unwrap_or(Regime::I3);
    let cell2 = cells.pop().expect("two cells");
    let cell1 = cells.pop().expect("two cells");
    Ok(LtdAllocation {
        regime,
        cells: splits,
        levels: LevelAllocation::new(cell1, cell2),
    })
}

// ---------------------------------------------------------------------------
// Decoding conditions
// ---------------------------------------------------------------------------

/// One inequality of a decoding-condition set, with its slack.
#[derive(Debug, Clone)]
pub struct ConditionMargin {
    pub cell: Cell,
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub what: String,
}

impl ConditionMargin {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn passes(&self) -> bool {
        self.margin() >= 0.0
    }
}

/// Outcome of a decoding-condition check. Failure is a report, not an error.
#[derive(Debug, Clone)]
pub struct DecodingReport {
    pub variant: &'static str,
    pub conditions: Vec<ConditionMargin>,
}

impl DecodingReport {
    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.passes())
    }

    pub fn worst(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.margin())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Four-inequality check for the weak regime (`rp2` present). The first
/// condition carries the `log2(8/delta)` decoding term.
pub fn check_decoding_weak(alloc: &LtdAllocation, cfg: &ImacConfig, delta: f64) -> DecodingReport {
    let log_term = (8.0 / delta).log2();
    DecodingReport {
        variant: "weak",
        conditions: weak_conditions(cfg, &alloc.cells, log_term),
    }
}

fn weak_conditions(
    cfg: &ImacConfig,
    cells: &[RateSplit; 2],
    log_term: f64,
) -> Vec<ConditionMargin> {
    let mut out = Vec::with_capacity(8);
    for cell in [Cell::One, Cell::Two] {
        let s = &cells[cell.index()];
        let o = &cells[cell.other().index()];
        let max_rc = o.rc1.max(o.rc2) as f64;
        let (rc1, rc2, rp1, rp2) = (s.rc1 as f64, s.rc2 as f64, s.rp1 as f64, s.rp2 as f64);
        let n_strong = cfg.strong(cell) as f64;
        let n_weak = cfg.weakuser(cell) as f64;
        let outg = cfg.outgoing(cell) as f64;
        let inc = cfg.incoming(cell) as f64;
        let conds = [
            (
                rc1 + rp1 + rp2 + rc2 + max_rc,
                n_strong - log_term,
                "all rates within the strong link",
            ),
            (
                rp1 + rp2 + rc2 + max_rc,
                n_weak,
                "all but the top common within the weak link",
            ),
            (
                rp2 + rp1 + max_rc,
                n_strong - outg,
                "private parts and interference within the private span",
            ),
            (
                rp1 + max_rc,
                inc,
                "deep private and interference within the interference span",
            ),
        ];
        for (i, (lhs, rhs, what)) in conds.into_iter().enumerate() {
            // A silent weak user imposes no constraint of its own; its
            // condition degenerates into the private-span one.
            if i == 1 && s.rc2 == 0 {
                continue;
            }
            out.push(ConditionMargin {
                cell,
                index: i + 1,
                lhs,
                rhs,
                what: what.to_string(),
            });
        }
    }
    out
}

/// Three-inequality check for the general regimes (`rp2 = 0`). Conditions are
/// suffix sums over the signals ordered by their span at the receiver; the
/// two largest spans carry the `log2(32/delta)` term. When the weak direct
/// link falls below the interference the roles swap accordingly.
pub fn check_decoding_general(
    alloc: &LtdAllocation,
    cfg: &SymmetricConfig,
    delta: f64,
) -> DecodingReport {
    let log_term = (32.0 / delta).log2();
    DecodingReport {
        variant: "general",
        conditions: general_conditions(cfg, &alloc.cells, log_term),
    }
}

fn general_conditions(
    cfg: &SymmetricConfig,
    cells: &[RateSplit; 2],
    log_term: f64,
) -> Vec<ConditionMargin> {
    let mut out = Vec::with_capacity(6);
    for cell in [Cell::One, Cell::Two] {
        let s = &cells[cell.index()];
        let o = &cells[cell.other().index()];
        let max_rc = o.rc1.max(o.rc2);
        // (span, rate) groups; stable sort keeps own signals ahead of the
        // interference on ties. A silent weak user contributes no group of
        // its own.
        let mut groups = vec![
            (cfg.n1 as u64, s.rc1, "strong direct"),
            (cfg.n2 as u64, s.rc2, "weak direct"),
            (cfg.ni as u64, max_rc, "aligned interference"),
        ];
        if s.rc2 == 0 {
            groups.remove(1);
        }
        groups.sort_by_key(|g| std::cmp::Reverse(g.0));
        let logged = if groups.len() == 3 { 2 } else { 1 };
        for (i, &(span, _, what)) in groups.iter().enumerate() {
            let suffix: u64 = groups[i..].iter().map(|g| g.1).sum::<u64>() + s.rp1;
            let term = if i < logged { log_term } else { 0.0 };
            out.push(ConditionMargin {
                cell,
                index: i + 1,
                lhs: suffix as f64,
                rhs: span as f64 - term,
                what: format!("suffix at the {what} span"),
            });
        }
    }
    out
}

/// Check with the condition set appropriate for the allocation's regime.
pub fn check_decoding(alloc: &LtdAllocation, cfg: &SymmetricConfig, delta: f64) -> DecodingReport {
    if alloc.regime.is_weak() {
        check_decoding_weak(alloc, &cfg.to_full(), delta)
    } else {
        check_decoding_general(alloc, cfg, delta)
    }
}

/// Shrink an allocation until the decoding conditions hold at the given `delta`.
/// Deficits are taken out of the failing cell's rates, starting with the top
/// common rate (which appears in the fewest conditions) and moving inward.
/// Returns the shaved allocation with rebuilt level sets; if the logarithmic
/// terms exceed the whole allocation the result is empty and the caller's
/// check will still report the failure.
pub fn shave_for_decoding(
    alloc: &LtdAllocation,
    cfg: &SymmetricConfig,
    delta: f64,
) -> Result<LtdAllocation, Error> {
    let mut shaved = alloc.clone();
    loop {
        let before: u64 = shaved.cells.iter().map(|c| c.cell_sum()).sum();
        let report = check_decoding(&shaved, cfg, delta);
        let Some(worst) = report
            .conditions
            .iter()
            .filter(|c| !c.passes())
            .min_by(|a, b| a.margin().total_cmp(&b.margin()))
        else {
            break;
        };
        let mut need = (-worst.margin()).ceil() as u64;
        let split = &mut shaved.cells[worst.cell.index()];
        for field in [
            &mut split.rc1,
            &mut split.rc2,
            &mut split.rp2,
            &mut split.rp1,
        ] {
            let take = need.min(*field);
            *field -= take;
            need -= take;
            if need == 0 {
                break;
            }
        }
        if need > 0 {
            // Remaining deficit comes from the interfering cell's commons.
            let other = &mut shaved.cells[worst.cell.other().index()];
            other.rc1 = sat(other.rc1, need);
            other.rc2 = sat(other.rc2, need);
        }
        let after: u64 = shaved.cells.iter().map(|c| c.cell_sum()).sum();
        if after == before {
            break;
        }
    }
    let (n1, n2, ni) = (cfg.n1 as u64, cfg.n2 as u64, cfg.ni as u64);
    let c1 = cell_levels(&shaved.cells[0], n1, n2, ni.min(n1))?;
    let c2 = cell_levels(&shaved.cells[1], n1, n2, ni.min(n1))?;
    shaved.levels = LevelAllocation::new(c1, c2);
    Ok(shaved)
}

// ---------------------------------------------------------------------------
// Upper bounds
// ---------------------------------------------------------------------------

/// The five sum-rate bounds and the active minimum.
#[derive(Debug, Clone)]
pub struct BoundSet {
    pub d: [Rat; 5],
}

impl BoundSet {
    pub fn min(&self) -> Rat {
        self.d.iter().copied().fold(self.d[0], Rat::min)
    }

    /// 1-based index of the first bound attaining the minimum.
    pub fn active(&self) -> usize {
        let m = self.min();
        self.d.iter().position(|&v| v == m).expect("nonempty") + 1
    }
}

/// Evaluate the five bounds for a symmetric configuration.
pub fn upper_bounds(cfg: &SymmetricConfig) -> BoundSet {
    let n1 = Rat::from(cfg.n1);
    let n2 = Rat::from(cfg.n2);
    let ni = Rat::from(cfg.ni);
    let two = Rat::int(2);
    let gap = (n1 - ni).pos();
    let d1 = two * gap.max(ni) + gap.min(ni);
    let d2 = Rat::new(2, 3) * (two * n1.max(ni) + gap);
    let d3 = two * n1;
    let d4 = (two * n2).max(two * gap).max(two * ni);
    let d5 = n1.max(ni) + n2.max(gap);
    BoundSet {
        d: [d1, d2, d3, d4, d5],
    }
}

/// Piecewise bound when the weaker user supports full multi-user gain.
/// Adjacent branches agree exactly at every breakpoint.
pub fn full_gain_bound(n1: u32, ni: u32) -> Rat {
    let (a, b) = (ni as i64, n1 as i64);
    if 2 * a <= b {
        Rat::int(2 * b - a)
    } else if 5 * a <= 3 * b {
        Rat::int(b + a)
    } else if a <= b {
        Rat::new(6 * b - 2 * a, 3)
    } else if 2 * a <= 3 * b {
        Rat::new(4 * a, 3)
    } else {
        Rat::int(2 * b)
    }
}

// ---------------------------------------------------------------------------
// Gap reports
// ---------------------------------------------------------------------------

/// Decoding slack of the constant-gap statement: `2*log2(128/delta)`, which
/// already includes the 4-bit allowance for fractional floors.
pub fn gap_guarantee(delta: f64) -> f64 {
    2.0 * (128.0 / delta).log2()
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub regime: Regime,
    pub achievable_raw: u64,
    pub achievable_guaranteed: f64,
    pub bound: Rat,
    pub gap: f64,
    pub guarantee: f64,
}

impl GapReport {
    pub fn within_guarantee(&self) -> bool {
        self.gap <= self.guarantee + 1e-9
    }
}

/// Achievable rate versus the bound minimum, with the constant-gap check.
pub fn gap_report(cfg: &SymmetricConfig, delta: f64) -> Result<GapReport, Error> {
    let alloc = allocate_best(cfg)?;
    let bound = upper_bounds(cfg).min();
    let raw = alloc.sum_rate();
    Ok(GapReport {
        regime: alloc.regime,
        achievable_raw: raw,
        achievable_guaranteed: alloc.guaranteed_rate(delta),
        bound,
        gap: bound.to_f64() - raw as f64,
        guarantee: gap_guarantee(delta),
    })
}

// ---------------------------------------------------------------------------
// Per-case condition identities
// ---------------------------------------------------------------------------

/// Expected relation of a decoding-condition sum in a given regime, with the
/// logarithmic terms stripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtMost,
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub cfg: SymmetricConfig,
    pub regime: Regime,
    pub condition: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub ok: bool,
}

/// Regimes whose raw allocations meet a condition with exact equality
/// (floor/ceil pairs cancel); everything else is checked as `<=`.
fn expected_relation(regime: Regime, condition: usize, cfg: &SymmetricConfig) -> Relation {
    match (regime, condition) {
        (Regime::I3, 1) | (Regime::I3, 3) | (Regime::I3, 4) => Relation::Equal,
        (Regime::II1, 3) => Relation::Equal,
        // Equality in II.2 needs the weak user active.
        (Regime::II2, 2) if cfg.n2 > cfg.ni => Relation::Equal,
        _ => Relation::AtMost,
    }
}

/// Scan the decoding-condition sums of raw allocations over every symmetric
/// configuration with `n1 <= n1_max` that classifies into `regime`,
/// confirming each condition's relation with the log terms stripped.
pub fn verify_conditions(regime: Regime, n1_max: u32) -> Vec<IdentityCheck> {
    let mut checks = Vec::new();
    for n1 in 1..=n1_max {
        for n2 in 0..=n1 {
            for ni in 0..=2 * n1 {
                let cfg = SymmetricConfig::new(n1, n2, ni);
                if classify_regime(&cfg) != regime {
                    continue;
                }
                let Ok(alloc) = allocate(&cfg) else { continue };
                let conds = if regime.is_weak() {
                    weak_conditions(&cfg.to_full(), &alloc.cells, 0.0)
                } else {
                    general_conditions(&cfg, &alloc.cells, 0.0)
                };
                for c in conds {
                    let relation = expected_relation(regime, c.index, &cfg);
                    let ok = match relation {
                        Relation::Equal => (c.lhs - c.rhs).abs() < 1e-9,
                        Relation::AtMost => c.lhs <= c.rhs + 1e-9,
                    };
                    checks.push(IdentityCheck {
                        cfg,
                        regime,
                        condition: c.index,
                        lhs: c.lhs,
                        rhs: c.rhs,
                        relation,
                        ok,
                    });
                }
            }
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n1: u32, n2: u32, ni: u32) -> SymmetricConfig {
        SymmetricConfig::new(n1, n2, ni)
    }

    #[test]
    fn classify_examples() {
        assert!(classify_regime(&sym(10, 10, 0)).is_weak());
        assert_eq!(classify_regime(&sym(10, 9, 5)), Regime::I3);
        assert_eq!(classify_regime(&sym(10, 6, 7)), Regime::IIIB3);
        assert_eq!(classify_regime(&sym(10, 9, 6)), Regime::IIIA1);
        assert_eq!(classify_regime(&sym(10, 9, 12)), Regime::IV1);
        assert_eq!(classify_regime(&sym(10, 6, 20)), Regime::V11);
        assert_eq!(classify_regime(&sym(10, 4, 16)), Regime::V2);
        assert_eq!(classify_regime(&sym(10, 4, 19)), Regime::V12);
    }

    #[test]
    fn classify_breakpoint_membership() {
        // Interval ends follow the case list: alpha = 1/2 is Case I,
        // 3/5 is III.A, 2/3 is III.A, 3/4 is III.B, 1 is III.C, 3/2 is IV.
        assert!(classify_regime(&sym(10, 10, 5)).is_weak());
        assert_eq!(classify_regime(&sym(10, 10, 6)), Regime::IIIA1);
        assert_eq!(classify_regime(&sym(9, 9, 6)), Regime::IIIA1);
        assert_eq!(classify_regime(&sym(8, 8, 6)), Regime::IIIB1);
        assert_eq!(classify_regime(&sym(8, 8, 8)), Regime::IIIC1);
        assert_eq!(classify_regime(&sym(8, 8, 12)), Regime::IV1);
    }

    #[test]
    fn allocate_case_i3_example() {
        let alloc = allocate(&sym(10, 9, 4)).unwrap();
        assert_eq!(alloc.regime, Regime::I3);
        let s = alloc.split(Cell::One);
        assert_eq!((s.rc1, s.rc2, s.rp1, s.rp2), (2, 2, 2, 2));
        assert_eq!(alloc.sum_rate(), 16);
    }

    #[test]
    fn allocate_case_v_example() {
        let alloc = allocate(&sym(10, 6, 20)).unwrap();
        assert_eq!(alloc.regime, Regime::V11);
        let s = alloc.split(Cell::One);
        assert_eq!((s.rc1, s.rc2), (5, 5));
        assert_eq!(alloc.sum_rate(), 20);
    }

    #[test]
    fn allocate_case_iv_collapses_without_weak_user() {
        let alloc = allocate(&sym(10, 0, 12)).unwrap();
        assert_eq!(alloc.regime, Regime::IV2);
        let s = alloc.split(Cell::One);
        assert_eq!(s.rc2, 0);
        // Falls back toward the interference-channel rate ni + n2 = 12.
        assert_eq!(alloc.sum_rate(), 2 * (4 + 2));
    }

    #[test]
    fn rp2_only_in_weak_regime() {
        for n1 in 1..=30 {
            for n2 in 0..=n1 {
                for ni in 0..=2 * n1 {
                    let alloc = allocate(&sym(n1, n2, ni)).unwrap();
                    let weak = alloc.regime.is_weak();
                    for s in &alloc.cells {
                        if s.rp2 > 0 {
                            assert!(weak, "rp2 > 0 outside weak regime at {n1},{n2},{ni}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounds_example_values() {
        let b = upper_bounds(&sym(10, 9, 4));
        assert_eq!(b.d[0], Rat::int(16));
        assert_eq!(b.d[1], Rat::new(52, 3));
        assert_eq!(b.d[2], Rat::int(20));
        assert_eq!(b.d[3], Rat::int(18));
        assert_eq!(b.d[4], Rat::int(19));
        assert_eq!(b.min(), Rat::int(16));
        assert_eq!(b.active(), 1);
    }

    #[test]
    fn bounds_section7_instance() {
        let b = upper_bounds(&sym(22, 20, 10));
        assert_eq!(b.min(), Rat::int(34));
    }

    #[test]
    fn bounds_zero_interference() {
        let b = upper_bounds(&sym(10, 9, 0));
        assert!(b.min() <= Rat::int(20));
        assert_eq!(b.d[0], Rat::int(20));
        assert_eq!(b.d[3], Rat::int(20));
    }

    #[test]
    fn bound_min_never_exceeds_d3() {
        for n1 in 0..=40u32 {
            for n2 in 0..=n1 {
                for ni in 0..=2 * n1 {
                    let b = upper_bounds(&sym(n1, n2, ni));
                    assert!(b.min() <= b.d[2]);
                }
            }
        }
    }

    #[test]
    fn full_gain_bound_breakpoint_continuity() {
        // Exact rational equality of adjacent branches at each breakpoint.
        let n1 = 60;
        let branch = |a: i64, b: i64| -> [Rat; 5] {
            [
                Rat::int(2 * b - a),
                Rat::int(b + a),
                Rat::new(6 * b - 2 * a, 3),
                Rat::new(4 * a, 3),
                Rat::int(2 * b),
            ]
        };
        let cases = [(30u32, 0usize, 1usize), (36, 1, 2), (60, 2, 3), (90, 3, 4)];
        for (ni, i, j) in cases {
            let v = branch(ni as i64, n1 as i64);
            assert_eq!(v[i], v[j], "breakpoint ni={ni}");
            assert_eq!(full_gain_bound(n1, ni), v[i]);
        }
    }

    #[test]
    fn full_gain_bound_alpha_scan() {
        assert_eq!(full_gain_bound(60, 0), Rat::int(120));
        assert_eq!(full_gain_bound(60, 30), Rat::int(90));
        assert_eq!(full_gain_bound(60, 36), Rat::int(96));
        assert_eq!(full_gain_bound(60, 40), Rat::new(280, 3));
        assert_eq!(full_gain_bound(60, 45), Rat::int(90));
        assert_eq!(full_gain_bound(60, 60), Rat::int(80));
        assert_eq!(full_gain_bound(60, 90), Rat::int(120));
        assert_eq!(full_gain_bound(60, 120), Rat::int(120));
    }

    #[test]
    fn weak_check_margins_small_vs_large() {
        // Raw allocations carry no decoding slack, so condition 1 fails at
        // delta = 1 by exactly log2(8) = 3 bits in case I.3.
        let cfg = sym(10, 9, 4);
        let alloc = allocate(&cfg).unwrap();
        let report = check_decoding_weak(&alloc, &cfg.to_full(), 1.0);
        let c1 = &report.conditions[0];
        assert!((c1.margin() + 3.0).abs() < 1e-12);
        assert!(!report.pass());

        // Condition 4 holds with zero slack: rp1 + max common = ni exactly.
        let c4 = &report.conditions[3];
        assert_eq!(c4.lhs, 4.0);
        assert_eq!(c4.rhs, 4.0);

        // After shaving, large configurations pass with margins >= 0.
        let cfg = sym(100, 90, 40);
        let alloc = shave_for_decoding(&allocate(&cfg).unwrap(), &cfg, 1.0).unwrap();
        let report = check_decoding_weak(&alloc, &cfg.to_full(), 1.0);
        assert!(report.pass(), "worst margin {}", report.worst());
    }

    #[test]
    fn zero_allocation_passes_checks() {
        let cfg = sym(10, 9, 4);
        let zero = RateSplit {
            rc1: 0,
            rc2: 0,
            rp1: 0,
            rp2: 0,
        };
        let alloc = LtdAllocation {
            regime: Regime::I3,
            cells: [zero, zero],
            levels: LevelAllocation::symmetric(crate::alloc::CellLevels::empty(10, 9)),
        };
        assert!(check_decoding_weak(&alloc, &cfg.to_full(), 1.0).pass());
        assert!(check_decoding_general(&alloc, &cfg, 1.0).pass());
    }

    #[test]
    fn general_check_swaps_below_interference() {
        // n2 < ni: the weak-direct condition must compare against n2 with the
        // interference span taking the logarithmic condition.
        let cfg = sym(10, 6, 7);
        let alloc = allocate(&cfg).unwrap();
        let report = check_decoding_general(&alloc, &cfg, 1.0);
        let c3 = &report.conditions[2];
        assert_eq!(c3.rhs, 6.0);
        assert_eq!(c3.lhs, (alloc.cells[0].rc2 + alloc.cells[0].rp1) as f64);
    }

    #[test]
    fn appendix_condition_scan_weak_and_general() {
        for regime in [
            Regime::I1,
            Regime::I2,
            Regime::I3,
            Regime::II1,
            Regime::II2,
            Regime::IIIA1,
            Regime::IIIA2,
            Regime::IIIA3,
            Regime::IIIB1,
            Regime::IIIB2,
            Regime::IIIB3,
            Regime::IIIB4,
            Regime::IIIC1,
            Regime::IIIC2,
            Regime::IV1,
            Regime::IV2,
            Regime::V11,
            Regime::V12,
            Regime::V2,
        ] {
            let checks = verify_conditions(regime, 24);
            assert!(
                !checks.is_empty() || matches!(regime, Regime::V12),
                "no configs for {regime}"
            );
            for c in &checks {
                assert!(
                    c.ok,
                    "{} condition {} at {:?}: lhs {} rhs {} ({:?})",
                    c.regime, c.condition, c.cfg, c.lhs, c.rhs, c.relation
                );
            }
        }
    }

    #[test]
    fn boundary_n2_equals_ni_checks_hold_both_ways() {
        // Degenerate n2 = ni: the raw condition sums (log terms stripped)
        // hold regardless of which ordering the tie resolves to.
        for n1 in 4..=24 {
            for ni in 0..=n1 {
                let cfg = sym(n1, ni.min(n1), ni);
                let alloc = allocate(&cfg).unwrap();
                if alloc.regime.is_weak() {
                    continue;
                }
                let conds = general_conditions(&cfg, &alloc.cells, 0.0);
                assert!(conds.iter().all(|c| c.lhs <= c.rhs + 1e-9), "{cfg:?}");
            }
        }
    }

    #[test]
    fn sandwich_small_scan() {
        // delta = 1 gives the tightest guarantee; larger budgets only relax
        // the same inequality.
        let slack = gap_guarantee(1.0) + 4.0;
        for n1 in 1..=30 {
            for n2 in 0..=n1 {
                for ni in 0..=2 * n1 {
                    let cfg = sym(n1, n2, ni);
                    let alloc = allocate_best(&cfg).unwrap();
                    let bound = upper_bounds(&cfg).min();
                    let raw = alloc.sum_rate() as f64;
                    assert!(
                        Rat::int(alloc.sum_rate() as i64) <= bound,
                        "rate exceeds bound at {cfg:?}"
                    );
                    assert!(
                        raw >= bound.to_f64() - slack,
                        "gap too large at {cfg:?}: raw {raw} bound {bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn weak_private_and_interference_levels_disjoint() {
        // The deep private part, the mid private part and the incoming
        // interference footprint occupy pairwise disjoint receiver levels.
        for n1 in 1..=24u32 {
            for n2 in 0..=n1 {
                for ni in 0..=n1 / 2 {
                    let cfg = sym(n1, n2, ni);
                    let alloc = allocate(&cfg).unwrap();
                    if !alloc.regime.is_weak() {
                        continue;
                    }
                    let s = alloc.split(Cell::One);
                    let rp2_range = (ni as usize + 1)..=(ni + s.rp2 as u32) as usize;
                    let rp1_range = ((n1 as u64 - s.rp1) as usize + 1)..=n1 as usize;
                    let footprint: Vec<usize> = alloc
                        .levels
                        .cell(Cell::Two)
                        .footprint(ni as usize)
                        .iter()
                        .map(|&j| (n1 - ni) as usize + j)
                        .collect();
                    for lvl in footprint {
                        assert!(!rp2_range.contains(&lvl), "{cfg:?}");
                        assert!(!rp1_range.contains(&lvl), "{cfg:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn gap_report_large_instance() {
        let r = gap_report(&sym(1000, 950, 400), 1.0).unwrap();
        assert_eq!(r.regime, Regime::I3);
        assert!(r.within_guarantee());
        assert!(r.gap <= 2.0 * 128f64.log2());
    }

    #[test]
    fn asymmetric_strong_interference_rejected() {
        let cfg = ImacConfig::new(20, 18, 19, 17, 15, 12).unwrap();
        assert!(allocate_weak_asymmetric(&cfg).is_err());
    }

    #[test]
    fn asymmetric_weak_allocation() {
        let cfg = ImacConfig::new(20, 18, 19, 17, 6, 5).unwrap();
        let alloc = allocate_weak_asymmetric(&cfg).unwrap();
        let c1 = alloc.split(Cell::One);
        // out = 5, in = 6 for cell 1.
        assert_eq!(c1.rc1, 2);
        assert_eq!(c1.rp1, 3);
        assert_eq!(c1.rp2, 20 - 5 - 6);
    }
}
