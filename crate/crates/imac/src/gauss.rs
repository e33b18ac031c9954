//! Gaussian channel: layered lattice power partitioning and rate accounting.
//!
//! The deterministic schemes transfer to the Gaussian channel by replacing
//! bit levels with power layers: a layer of power `theta` decodes against the
//! noise of everything beneath it at rate `log2(1 + theta/N)`, or
//! `log2(1/K + theta/N)` when `K` lattice points align on it. All power
//! bookkeeping runs in the log2 domain to survive powers like `2^60`;
//! identity checks use a relative tolerance of 1e-9.

use crate::config::Cell;
use crate::config::SymmetricConfig;
use crate::error::Error;
use crate::ld::phi_f64;
use crate::ltd::{upper_bounds, ConditionMargin};
use crate::rng::SplitMix64;

const REL_TOL: f64 = 1e-9;

/// Constant-gap allowance when carrying deterministic bounds over to the
/// Gaussian channel: 8 bits to restore a peak power constraint plus 3.1 bits
/// to truncate at noise level.
pub const GAUSSIAN_BOUND_SLACK: f64 = 11.1;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// SNR-exponent description of the Gaussian channel. Cell `i`'s strong user
/// sees `SNR_i1 = 2^log_snr[i]`; the weak user `SNR_i2 = SNR_i1^beta[i]`; the
/// interference arriving at receiver `i` is `INR = SNR_i1^alpha[i]`.
#[derive(Debug, Clone, Copy)]
pub struct GaussConfig {
    pub log_snr: [f64; 2],
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

impl GaussConfig {
    pub fn new(log_snr: [f64; 2], alpha: [f64; 2], beta: [f64; 2]) -> Result<Self, Error> {
        for i in 0..2 {
            if log_snr[i] <= 0.0 {
                return Err(Error::domain("SNR must exceed 1 (log > 0)"));
            }
            if !(0.0..=1.0).contains(&beta[i]) || beta[i] <= 0.0 {
                return Err(Error::domain("beta must lie in (0, 1]"));
            }
            if alpha[i] < 0.0 {
                return Err(Error::domain("alpha must be non-negative"));
            }
        }
        Ok(GaussConfig {
            log_snr,
            alpha,
            beta,
        })
    }

    /// Symmetric channel at transmit power `2^log_p`.
    pub fn symmetric(log_p: f64, alpha: f64, beta: f64) -> Result<Self, Error> {
        GaussConfig::new([log_p, log_p], [alpha, alpha], [beta, beta])
    }

    fn s(&self, cell: Cell) -> f64 {
        self.log_snr[cell.index()]
    }

    /// log2 of the interference power arriving at this cell's receiver.
    pub fn log_in(&self, cell: Cell) -> f64 {
        self.alpha[cell.index()] * self.s(cell)
    }

    /// log2 of the interference power this cell causes at the other receiver.
    pub fn log_out(&self, cell: Cell) -> f64 {
        self.log_in(cell.other())
    }

    /// log2 of the weak user's SNR.
    pub fn log_snr2(&self, cell: Cell) -> f64 {
        self.beta[cell.index()] * self.s(cell)
    }

    /// Alignment block size `(1 - beta_i) * log SNR_i1`.
    pub fn block(&self, cell: Cell) -> f64 {
        (1.0 - self.beta[cell.index()]) * self.s(cell)
    }

    /// Real layer count of this cell's common part.
    pub fn big_l(&self, cell: Cell) -> Result<f64, Error> {
        let q = self.block(cell);
        if q <= 0.0 {
            return Err(Error::domain(
                "beta = 1 leaves no alignment blocks (singularity)",
            ));
        }
        Ok(self.log_out(cell) / q)
    }

    /// Strict weak-interference predicate:
    /// `INR_1 + INR_2 <= min(SNR_12, SNR_22)` (linear scale).
    pub fn is_weak_strict(&self) -> bool {
        let sum = log2_sum(self.log_in(Cell::One), self.log_in(Cell::Two));
        sum <= self.log_snr2(Cell::One).min(self.log_snr2(Cell::Two)) + REL_TOL
    }

    /// Relaxed predicate against the strong users' SNRs. Accepted with a
    /// caveat flag: the alignment machinery still applies when additionally
    /// `in + out <= log SNR` per cell.
    pub fn is_weak_relaxed(&self) -> bool {
        let sum = log2_sum(self.log_in(Cell::One), self.log_in(Cell::Two));
        sum <= self.s(Cell::One).min(self.s(Cell::Two)) + REL_TOL
    }

    /// The layered partition needs room for a private window: incoming plus
    /// outgoing interference must fit under each direct link. The linear
    /// weak predicate alone does not imply this (exponents may sum past 1).
    pub fn supports_layering(&self) -> bool {
        [Cell::One, Cell::Two]
            .iter()
            .all(|&c| self.log_in(c) + self.log_out(c) <= self.s(c) + REL_TOL)
    }
}

fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + (lo - hi).exp2()).log2()
}

// ---------------------------------------------------------------------------
// Input modulation
// ---------------------------------------------------------------------------

/// Raw fine gains `h_{ik}^j in (1, 2]`: `h[user][rx]` with users ordered
/// (11, 12, 21, 22) and rx 0/1.
#[derive(Debug, Clone, Copy)]
pub struct FineGains {
    pub h: [[f64; 2]; 4],
}

/// Effective gains after each transmitter pre-multiplies with the partner's
/// cross gain so both interference terms coincide at each receiver.
#[derive(Debug, Clone, Copy)]
pub struct ModulatedGains {
    pub g11_1: f64,
    pub g12_1: f64,
    pub gi_1: f64,
    pub g21_2: f64,
    pub g22_2: f64,
    pub gi_2: f64,
}

/// Form the effective gains `g = h * h'` of the modulated inputs and check
/// the alignment precondition: the two interference products at each
/// receiver must be identical.
pub fn modulate_inputs(h: &FineGains) -> Result<ModulatedGains, Error> {
    for hv in h.h.iter().flatten() {
        if !(*hv > 1.0 && *hv <= 2.0) {
            return Err(Error::domain(format!("fine gain {hv} outside (1, 2]")));
        }
    }
    let [h11, h12, h21, h22] = h.h;
    let g = ModulatedGains {
        g11_1: h11[0] * h12[1],
        g12_1: h12[0] * h11[1],
        gi_1: h21[0] * h22[0],
        g21_2: h21[1] * h22[0],
        g22_2: h22[1] * h21[0],
        gi_2: h11[1] * h12[1],
    };
    // Both interferers of cell 2 arrive at receiver 1 with gain h21^1 * h22^1.
    let i1_a = h21[0] * h22[0];
    let i1_b = h22[0] * h21[0];
    let i2_a = h11[1] * h12[1];
    let i2_b = h12[1] * h11[1];
    if (i1_a - i1_b).abs() > REL_TOL * i1_a || (i2_a - i2_b).abs() > REL_TOL * i2_a {
        return Err(Error::domain("interference gains fail to align"));
    }
    debug_assert!(g.g11_1 > 1.0 && g.g11_1 <= 4.0);
    Ok(g)
}

// ---------------------------------------------------------------------------
// Power partition
// ---------------------------------------------------------------------------

/// Role of one power layer within a cell's partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerRole {
    /// Alignment block `index` of the common part; `user` 1 or 2 transmits.
    Common { index: u64, user: u8 },
    /// Fractional leftover of the common part. Paired remainders (odd block
    /// count) align at the other receiver; unpaired ones are plain private
    /// data that still lands above the other receiver's noise floor.
    CommonRemainder { user: u8, paired: bool },
    /// Interference-free private window between the common part and the
    /// incoming interference.
    PrivateFree,
    /// One alignment slot of the incoming interference; `occupied` slots
    /// carry the other cell's aligned pairs, free ones carry own data.
    InterferenceSlot { index: u64, occupied: bool },
    /// Window below the lowest interference slot, down to the noise floor.
    InterferenceTail,
}

impl LayerRole {
    /// Does the owning cell place a codeword on this layer?
    pub fn own_use(&self) -> bool {
        !matches!(self, LayerRole::InterferenceSlot { occupied: true, .. })
    }

    fn user(&self) -> u8 {
        match self {
            LayerRole::Common { user, .. } | LayerRole::CommonRemainder { user, .. } => *user,
            _ => 1,
        }
    }
}

/// One power window `(2^log_lo, 2^log_hi]`.
#[derive(Debug, Clone, Copy)]
pub struct Layer {
    pub role: LayerRole,
    pub log_hi: f64,
    pub log_lo: f64,
}

impl Layer {
    /// Linear layer power `2^hi - 2^lo`.
    pub fn theta(&self) -> f64 {
        self.log_hi.exp2() - self.log_lo.exp2()
    }
}

/// A cell's complete power decomposition, from `SNR_i1` down to the noise
/// floor.
#[derive(Debug, Clone)]
pub struct PowerPartition {
    pub cell: Cell,
    pub layers: Vec<Layer>,
    pub l_real: f64,
    pub l_floor: u64,
    /// True when the common part has a fractional remainder block.
    pub fractional: bool,
}

impl PowerPartition {
    pub fn l_max(&self) -> usize {
        self.layers.len()
    }

    /// Sum of all layer powers; telescopes to `SNR_i1 - 1`.
    pub fn total_power(&self) -> f64 {
        self.layers.iter().map(Layer::theta).sum()
    }

    /// Power available to the weak user: every layer fully below its SNR.
    pub fn weak_user_power(&self, log_snr2: f64) -> f64 {
        self.layers
            .iter()
            .filter(|l| l.log_hi <= log_snr2 + REL_TOL)
            .map(Layer::theta)
            .sum()
    }
}

fn floor_with_tol(x: f64) -> (u64, bool) {
    let f = (x + REL_TOL).floor();
    let fractional = x - f > REL_TOL;
    (f.max(0.0) as u64, fractional)
}

/// Partition a cell's receive power into alignment blocks, remainder,
/// interference-free private window, interference slots and tail. Boundaries
/// come from partial-sum targets, so the layer powers telescope exactly.
pub fn power_partition(cfg: &GaussConfig, cell: Cell) -> Result<PowerPartition, Error> {
    let s = cfg.s(cell);
    let q = cfg.block(cell);
    if q <= 0.0 {
        return Err(Error::domain(
            "beta = 1 leaves no alignment blocks (singularity)",
        ));
    }
    if !cfg.supports_layering() {
        return Err(Error::regime(
            "incoming + outgoing interference exceed the direct link; no layered scheme here",
        ));
    }
    let inc = cfg.log_in(cell);
    let out = cfg.log_out(cell);
    let l_real = out / q;
    let (l_floor, fractional) = floor_with_tol(l_real);

    let other = cell.other();
    let qj = cfg.block(other);
    if qj <= 0.0 {
        return Err(Error::domain(
            "beta = 1 leaves no alignment blocks (singularity)",
        ));
    }
    let (lj_floor, _) = floor_with_tol(cfg.log_in(cell) / qj);

    let mut layers = Vec::new();
    for l in 1..=l_floor {
        layers.push(Layer {
            role: LayerRole::Common {
                index: l,
                user: if l % 2 == 1 { 1 } else { 2 },
            },
            log_hi: s - (l - 1) as f64 * q,
            log_lo: s - l as f64 * q,
        });
    }
    if fractional {
        let user = if l_floor % 2 == 1 { 2 } else { 1 };
        layers.push(Layer {
            role: LayerRole::CommonRemainder {
                user,
                paired: l_floor % 2 == 1,
            },
            log_hi: s - l_floor as f64 * q,
            log_lo: s - out,
        });
    }
    if s - out > inc + REL_TOL {
        layers.push(Layer {
            role: LayerRole::PrivateFree,
            log_hi: s - out,
            log_lo: inc,
        });
    }
    for m in 1..=lj_floor {
        layers.push(Layer {
            role: LayerRole::InterferenceSlot {
                index: m,
                occupied: m % 2 == 1,
            },
            log_hi: inc - (m - 1) as f64 * qj,
            log_lo: inc - m as f64 * qj,
        });
    }
    let tail_hi = inc - lj_floor as f64 * qj;
    if tail_hi > REL_TOL {
        layers.push(Layer {
            role: LayerRole::InterferenceTail,
            log_hi: tail_hi,
            log_lo: 0.0,
        });
    }
    layers.retain(|l| l.log_hi - l.log_lo > REL_TOL);
    Ok(PowerPartition {
        cell,
        layers,
        l_real,
        l_floor,
        fractional,
    })
}

// ---------------------------------------------------------------------------
// Per-level rates
// ---------------------------------------------------------------------------

/// Lattice decoding bound for a layer of power `theta` over noise `n`:
/// `log2(1/k + theta/n)`, clamped at zero. `k` is the number of lattice
/// points aligned on the layer.
pub fn level_rate(theta: f64, n: f64, k: u32) -> f64 {
    assert!(theta > 0.0 && n > 0.0 && (k == 1 || k == 2));
    (1.0 / k as f64 + theta / n).log2().max(0.0)
}

/// Power window as observed at a receiver, used for noise accounting.
#[derive(Debug, Clone, Copy)]
struct StackEntry {
    log_hi: f64,
    log_lo: f64,
    /// Interference this receiver never decodes (an unpaired remainder):
    /// its power stays noise even where it overlaps a decode window.
    residual: bool,
}

impl StackEntry {
    fn power(&self) -> f64 {
        self.log_hi.exp2() - self.log_lo.exp2()
    }
}

/// Everything a receiver sees above its noise floor: own layers once, each
/// interfering codeword once (so an aligned pair contributes its slot power
/// twice).
fn receiver_stack(cfg: &GaussConfig, parts: &[PowerPartition; 2], rx: Cell) -> Vec<StackEntry> {
    let mut stack = Vec::new();
    for layer in &parts[rx.index()].layers {
        if layer.role.own_use() {
            stack.push(StackEntry {
                log_hi: layer.log_hi,
                log_lo: layer.log_lo,
                residual: false,
            });
        }
    }
    let other = rx.other();
    let s_j = cfg.log_snr[other.index()];
    let q_j = cfg.block(other);
    let shift_u1 = cfg.log_in(rx) - s_j;
    for layer in &parts[other.index()].layers {
        if !layer.role.own_use() {
            continue;
        }
        // Only common-part layers reach above this receiver's noise floor;
        // unpaired remainders arrive without an alignment partner and are
        // never decoded here.
        let residual = match layer.role {
            LayerRole::Common { .. } => false,
            LayerRole::CommonRemainder { paired, .. } => !paired,
            _ => continue,
        };
        // The weak user transmits under a gain smaller by one block, so its
        // codewords arrive one block higher than the strong user's.
        let shift = if layer.role.user() == 2 {
            shift_u1 + q_j
        } else {
            shift_u1
        };
        let hi = layer.log_hi + shift;
        let lo = (layer.log_lo + shift).max(0.0);
        if hi > lo + REL_TOL {
            stack.push(StackEntry {
                log_hi: hi,
                log_lo: lo,
                residual,
            });
        }
    }
    stack
}

/// Effective noise for decoding a window `(log_lo, log_hi]` at a receiver:
/// one plus every decodable entry strictly below, plus any residual
/// interference not strictly above it.
fn noise_at(stack: &[StackEntry], log_hi: f64, log_lo: f64) -> f64 {
    1.0 + stack
        .iter()
        .filter(|e| {
            if e.residual {
                e.log_hi <= log_hi + REL_TOL
            } else {
                e.log_hi <= log_lo + REL_TOL
            }
        })
        .map(StackEntry::power)
        .sum::<f64>()
}

/// Noise the strong user's layer `l` sees on its direct path, counting
/// aligned interference twice.
pub fn direct_noise(cfg: &GaussConfig, cell: Cell, layer_index: usize) -> Result<f64, Error> {
    let parts = [
        power_partition(cfg, Cell::One)?,
        power_partition(cfg, Cell::Two)?,
    ];
    let layer = parts[cell.index()]
        .layers
        .get(layer_index)
        .copied()
        .ok_or_else(|| Error::invalid_dimension("layer index out of range"))?;
    let stack = receiver_stack(cfg, &parts, cell);
    Ok(noise_at(&stack, layer.log_hi, layer.log_lo))
}

/// Geometric series of odd-slot interference ratios; stays below one because
/// `SNR > 1`.
pub fn nu2(cfg: &GaussConfig, cell: Cell) -> f64 {
    let q = cfg.block(cell);
    let (lf, _) = floor_with_tol(cfg.big_l(cell).unwrap_or(0.0));
    let mut v = 0.0;
    let mut m = 1;
    while m <= lf {
        v += ((1.0 - m as f64) * q).exp2() - (-(m as f64) * q).exp2();
        m += 2;
    }
    v
}

// ---------------------------------------------------------------------------
// Achievable sum rate
// ---------------------------------------------------------------------------

/// Rate of one decoded layer in the scheme.
#[derive(Debug, Clone)]
pub struct LayerRate {
    pub cell: Cell,
    pub role: LayerRole,
    pub direct: f64,
    /// Cap from decoding the aligned sum at the unintended receiver, when the
    /// layer is part of the common alignment structure.
    pub align_cap: Option<f64>,
    pub rate: f64,
}

/// Achievable sum rate: the raw per-level total of the layered scheme and
/// the closed-form lower bound it is guaranteed to beat.
#[derive(Debug, Clone)]
pub struct GaussRate {
    pub raw: f64,
    pub closed_form: f64,
    pub per_layer: Vec<LayerRate>,
    pub l_floor: [u64; 2],
    /// Closed-form constant is derived for even block counts; odd-count
    /// configurations reuse it and are flagged.
    pub odd_layer_count: bool,
    /// Configuration only satisfies the relaxed weak predicate.
    pub relaxed_regime: bool,
}

fn align_window(cfg: &GaussConfig, cell: Cell, layer: &Layer) -> (f64, f64) {
    // Received window of the strong user's codeword at the other receiver.
    let shift = cfg.log_out(cell) - cfg.s(cell);
    ((layer.log_hi + shift), (layer.log_lo + shift).max(0.0))
}

/// Raw per-level achievable sum rate with full noise accounting, plus the
/// closed-form expression. Errors outside the (relaxed) weak regime or at
/// the `beta = 1` singularity.
pub fn achievable_sum_rate(cfg: &GaussConfig) -> Result<GaussRate, Error> {
    if !cfg.is_weak_relaxed() {
        return Err(Error::regime(
            "outside the weak interference regime (even relaxed)",
        ));
    }
    let relaxed = !cfg.is_weak_strict();
    let parts = [
        power_partition(cfg, Cell::One)?,
        power_partition(cfg, Cell::Two)?,
    ];
    let stacks = [
        receiver_stack(cfg, &parts, Cell::One),
        receiver_stack(cfg, &parts, Cell::Two),
    ];

    let mut per_layer = Vec::new();
    for cell in [Cell::One, Cell::Two] {
        let part = &parts[cell.index()];
        let own_stack = &stacks[cell.index()];
        let other_stack = &stacks[cell.other().index()];
        // Pair structure: block l (odd) with block l+1 or a paired remainder.
        let paired_partner = |l: u64| -> bool {
            l % 2 == 1 && (l < part.l_floor || (l == part.l_floor && part.fractional))
        };
        for layer in &part.layers {
            if !layer.role.own_use() {
                continue;
            }
            let theta = layer.theta();
            let direct = level_rate(theta, noise_at(own_stack, layer.log_hi, layer.log_lo), 1);
            let align_cap = match layer.role {
                LayerRole::Common { index, .. } => {
                    let head = if index % 2 == 1 { index } else { index - 1 };
                    let head_layer = part.layers[(head - 1) as usize];
                    let (hi, lo) = align_window(cfg, cell, &head_layer);
                    let k = if paired_partner(head) { 2 } else { 1 };
                    let n = noise_at(other_stack, hi, lo);
                    Some(level_rate(hi.exp2() - lo.exp2(), n, k))
                }
                LayerRole::CommonRemainder { paired: true, .. } => {
                    // Aligned into the head block's slot.
                    let head_layer = part.layers[(part.l_floor - 1) as usize];
                    let (hi, lo) = align_window(cfg, cell, &head_layer);
                    let n = noise_at(other_stack, hi, lo);
                    Some(level_rate(hi.exp2() - lo.exp2(), n, 2))
                }
                _ => None,
            };
            let rate = match align_cap {
                Some(cap) => direct.min(cap).max(0.0),
                None => direct,
            };
            per_layer.push(LayerRate {
                cell,
                role: layer.role,
                direct,
                align_cap,
                rate,
            });
        }
    }
    let raw: f64 = per_layer.iter().map(|l| l.rate).sum();
    let closed_form = closed_form_sum_rate(cfg)?;
    let l_floor = [parts[0].l_floor, parts[1].l_floor];
    Ok(GaussRate {
        raw,
        closed_form,
        per_layer,
        l_floor,
        odd_layer_count: l_floor.iter().any(|l| l % 2 == 1),
        relaxed_regime: relaxed,
    })
}

/// Closed-form achievable sum rate: the deterministic expression carried
/// over with the lattice constants `-6 - 2.5(L1 + L2)`.
pub fn closed_form_sum_rate(cfg: &GaussConfig) -> Result<f64, Error> {
    let mut v = 0.0;
    for cell in [Cell::One, Cell::Two] {
        let lf = floor_with_tol(cfg.big_l(cell)?).0;
        v += cfg.log_snr2(cell) - cfg.log_in(cell);
        v += phi_f64(cfg.log_in(cell), cfg.block(cell));
        v -= 3.0 + 2.5 * lf as f64;
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Alignment check
// ---------------------------------------------------------------------------

/// Received powers of the strong user's layer `l` and the weak user's layer
/// `l+1` at the unintended receiver; equal when the modulation aligned them.
#[derive(Debug, Clone, Copy)]
pub struct AlignmentPowers {
    pub from_strong: f64,
    pub from_weak: f64,
    pub aligned: bool,
    /// The intended receiver keeps them on separate levels only when
    /// `beta < 1`.
    pub separated_at_home: bool,
}

/// Verify the alignment identity for the pair `(l, l+1)` of a cell's common
/// part.
pub fn alignment_check(cfg: &GaussConfig, cell: Cell, l: u64) -> Result<AlignmentPowers, Error> {
    let part = power_partition(cfg, cell)?;
    if l == 0 || (l + 1) as usize > part.layers.len() {
        return Err(Error::invalid_dimension("pair outside the common part"));
    }
    let s = cfg.s(cell);
    let q = cfg.block(cell);
    let out = cfg.log_out(cell);
    // theta_l * INR / SNR_i1 for the strong user.
    let theta_l = (s - (l - 1) as f64 * q).exp2() - (s - l as f64 * q).exp2();
    let from_strong = theta_l * (out - s).exp2();
    // theta_{l+1} * INR / SNR_i2 for the weak user.
    let theta_next = (s - l as f64 * q).exp2() - (s - (l + 1) as f64 * q).exp2();
    let from_weak = theta_next * (out - cfg.log_snr2(cell)).exp2();
    let aligned = (from_strong - from_weak).abs() <= REL_TOL * from_strong.abs().max(1e-300);
    Ok(AlignmentPowers {
        from_strong,
        from_weak,
        aligned,
        separated_at_home: cfg.beta[cell.index()] < 1.0 - REL_TOL,
    })
}

// ---------------------------------------------------------------------------
// Upper bound
// ---------------------------------------------------------------------------

/// Gaussian sum-rate upper bound: the deterministic five-way bound evaluated
/// at `n = ceil(log SNR)` plus the transfer constant.
pub fn gaussian_upper_bound(cfg: &GaussConfig) -> Result<f64, Error> {
    let sym = |x: f64, y: f64| (x - y).abs() <= REL_TOL * x.abs().max(1.0);
    if !sym(cfg.log_snr[0], cfg.log_snr[1])
        || !sym(cfg.beta[0], cfg.beta[1])
        || !sym(cfg.alpha[0], cfg.alpha[1])
    {
        return Err(Error::regime(
            "upper bound evaluated for symmetric coarse structure only",
        ));
    }
    let n1 = cfg.log_snr[0].ceil() as u32;
    let n2 = cfg.log_snr2(Cell::One).ceil() as u32;
    let ni = cfg.log_in(Cell::One).ceil() as u32;
    let bounds = upper_bounds(&SymmetricConfig::new(n1, n2.min(n1), ni));
    Ok(bounds.min().to_f64() + GAUSSIAN_BOUND_SLACK)
}

// ---------------------------------------------------------------------------
// Outer code
// ---------------------------------------------------------------------------

/// Modulation-to-outer-code penalty: 1.5 bits per signal stream, floored at
/// zero. This is the rate at which the error probability vanishes.
pub fn outer_code_adjust(rate: f64) -> f64 {
    (rate - 1.5).max(0.0)
}

/// Same penalty applied to a sum over `streams` signals.
pub fn outer_code_adjust_sum(rate_sum: f64, streams: u32) -> f64 {
    (rate_sum - 1.5 * streams as f64).max(0.0)
}

// ---------------------------------------------------------------------------
// Minimum constellation distance
// ---------------------------------------------------------------------------

/// Per-signal rates of the modulated constellation.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussRates {
    pub rc11: u32,
    pub rc12: u32,
    pub rc21: u32,
    pub rc22: u32,
    pub rp11: u32,
    pub rp22: u32,
    /// Mid private parts, used only in the weak layout.
    pub rp2_11: u32,
    pub rp2_22: u32,
}

/// Coarse structure plus rates of a constellation-distance experiment.
#[derive(Debug, Clone, Copy)]
pub struct DistanceLayout {
    pub n1: u32,
    pub n2: u32,
    pub ni: u32,
    pub rates: GaussRates,
    /// Weak layout carries the extra mid private field.
    pub weak: bool,
}

#[derive(Debug, Clone, Copy)]
struct Field {
    gain: f64,
    offset: f64, // lattice pitch A at receiver scale
    q: i64,      // |q| <= Q
}

fn rx_fields(layout: &DistanceLayout, g: &ModulatedGains, rx: Cell) -> Vec<Field> {
    let r = &layout.rates;
    let (g1, g2, gi) = match rx {
        Cell::One => (g.g11_1, g.g12_1, g.gi_1),
        Cell::Two => (g.g21_2, g.g22_2, g.gi_2),
    };
    let (rc_own1, rc_own2, rp_own, rp2_own) = match rx {
        Cell::One => (r.rc11, r.rc12, r.rp11, r.rp2_11),
        Cell::Two => (r.rc21, r.rc22, r.rp22, r.rp2_22),
    };
    let rc_int = match rx {
        Cell::One => r.rc21.max(r.rc22),
        Cell::Two => r.rc11.max(r.rc12),
    };
    let a = |n: u32, rate: u32| ((n as f64) - rate as f64).exp2();
    // A rate-R field offers 2^R points, so deltas range over +-(2^R - 1);
    // the aligned interference is a sum of two such signals.
    let deltas = |rate: u32| (1i64 << rate) - 1;
    let mut fields = vec![
        Field {
            gain: g1,
            offset: a(layout.n1, rc_own1),
            q: deltas(rc_own1),
        },
        Field {
            gain: g2,
            offset: a(layout.n2, rc_own2),
            q: deltas(rc_own2),
        },
        Field {
            gain: gi,
            offset: a(layout.ni, rc_int),
            q: 2 * deltas(rc_int),
        },
        Field {
            gain: g1,
            offset: 1.0,
            q: deltas(rp_own),
        },
    ];
    if layout.weak {
        fields.push(Field {
            gain: g1,
            offset: a(layout.n1 - layout.ni, rp2_own),
            q: deltas(rp2_own),
        });
    }
    fields.retain(|f| f.q >= 1);
    fields
}

/// Exhaustive minimum distance between distinct received triples at one
/// receiver: `min |sum g_f A_f q_f|` over integer deltas, not all zero.
/// All fields but the widest are enumerated; the widest is solved by
/// rounding, which is exact for a one-dimensional lattice.
pub fn min_constellation_distance(
    layout: &DistanceLayout,
    gains: &ModulatedGains,
    rx: Cell,
    cap: u64,
) -> Result<f64, Error> {
    let fields = rx_fields(layout, gains, rx);
    min_distance_fields(&fields, cap)
}

fn min_distance_fields(fields: &[Field], cap: u64) -> Result<f64, Error> {
    if fields.is_empty() {
        return Ok(f64::INFINITY);
    }
    let solve_idx = fields
        .iter()
        .enumerate()
        .max_by_key(|(_, f)| f.q)
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut combos: u64 = 1;
    for (i, f) in fields.iter().enumerate() {
        if i != solve_idx {
            combos = combos.saturating_mul(2 * f.q as u64 + 1);
            if combos > cap {
                return Err(Error::too_large(format!(
                    "constellation enumeration {combos} exceeds cap {cap}"
                )));
            }
        }
    }
    let solve = fields[solve_idx];
    let pitch = solve.gain * solve.offset;
    let others: Vec<Field> = fields
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != solve_idx)
        .map(|(_, f)| *f)
        .collect();

    let mut best = f64::INFINITY;
    let mut qs = vec![0i64; others.len()];
    loop {
        let x: f64 = others
            .iter()
            .zip(&qs)
            .map(|(f, &q)| f.gain * f.offset * q as f64)
            .sum();
        let all_zero = qs.iter().all(|&q| q == 0);
        if all_zero {
            // Need a nonzero delta in the solved field.
            if solve.q >= 1 {
                best = best.min(pitch.abs());
            }
        } else {
            let ideal = -x / pitch;
            let q = ideal.round().clamp(-(solve.q as f64), solve.q as f64) as i64;
            best = best.min((x + pitch * q as f64).abs());
        }
        // Odometer over the enumerated fields.
        let mut i = 0;
        loop {
            if i == qs.len() {
                return Ok(best);
            }
            if qs[i] < others[i].q {
                qs[i] += 1;
                break;
            }
            qs[i] = -others[i].q;
            i += 1;
        }
    }
}

/// Decoding conditions guaranteeing minimum distance 32 in the strong
/// interference layout (`alpha >= 1/2`), with constant 13104.
pub fn strong_distance_conditions(layout: &DistanceLayout, delta: f64) -> Vec<ConditionMargin> {
    distance_conditions(layout, delta, 13104.0, false)
}

/// Weak-layout variant with constant 2016 and the extra private field.
pub fn weak_distance_conditions(layout: &DistanceLayout, delta: f64) -> Vec<ConditionMargin> {
    distance_conditions(layout, delta, 2016.0, true)
}

fn distance_conditions(
    layout: &DistanceLayout,
    delta: f64,
    c: f64,
    weak: bool,
) -> Vec<ConditionMargin> {
    let r = &layout.rates;
    let log_c = (c / delta).log2();
    let (n1, n2, ni) = (layout.n1 as f64, layout.n2 as f64, layout.ni as f64);
    let mut out = Vec::new();
    for rx in [Cell::One, Cell::Two] {
        let (rc_o1, rc_o2, rp, rp2, rc_i) = match rx {
            Cell::One => (r.rc11, r.rc12, r.rp11, r.rp2_11, r.rc21.max(r.rc22)),
            Cell::Two => (r.rc21, r.rc22, r.rp22, r.rp2_22, r.rc11.max(r.rc12)),
        };
        let (rc_o1, rc_o2, rp, rp2, rc_i) = (
            rc_o1 as f64,
            rc_o2 as f64,
            rp as f64,
            rp2 as f64,
            rc_i as f64,
        );
        let conds: Vec<(f64, f64, &str)> = if weak {
            vec![
                (
                    rc_o1 + rc_o2 + rc_i + rp + rp2,
                    n1 - log_c,
                    "all rates under n1",
                ),
                (
                    rc_o2 + rc_i + rp + rp2,
                    n2 - 6.0,
                    "weak-user group under n2",
                ),
                (rc_i + rp + rp2, n1 - ni, "private span"),
                (rc_i + rp2, ni, "interference span"),
            ]
        } else {
            vec![
                (rc_o1 + rc_o2 + rc_i + rp, n1 - log_c, "all rates under n1"),
                (rc_o2 + rc_i + rp, n2 - log_c, "weak-user group under n2"),
                (rc_i + rp, ni - 6.0, "interference span"),
            ]
        };
        for (i, (lhs, rhs, what)) in conds.into_iter().enumerate() {
            out.push(ConditionMargin {
                cell: rx,
                index: i + 1,
                lhs,
                rhs,
                what: what.to_string(),
            });
        }
    }
    out
}

/// Monte Carlo over raw fine-gain tuples: fraction of samples where either
/// receiver's minimum constellation distance falls below 32.
pub fn distance_outage(
    layout: &DistanceLayout,
    samples: u64,
    seed: u64,
    cap: u64,
) -> Result<f64, Error> {
    if samples == 0 {
        return Err(Error::invalid_input("need at least one sample"));
    }
    let root = SplitMix64::new(seed);
    let mut failures = 0u64;
    for s in 0..samples {
        let mut rng = root.stream(s);
        let mut h = [[0.0; 2]; 4];
        for row in h.iter_mut() {
            for v in row.iter_mut() {
                *v = 1.0 + rng.next_f64().max(f64::MIN_POSITIVE);
            }
        }
        let g = modulate_inputs(&FineGains { h })?;
        let d1 = min_constellation_distance(layout, &g, Cell::One, cap)?;
        let d2 = min_constellation_distance(layout, &g, Cell::Two, cap)?;
        if d1.min(d2) < 32.0 {
            failures += 1;
        }
    }
    Ok(failures as f64 / samples as f64)
}
