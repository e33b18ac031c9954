//! Exact bit-level arithmetic over F2.
//!
//! Signals are bit vectors indexed by *level*, level 1 being the most
//! significant bit. Channel action is a down-shift (coarse gain) followed by
//! a unit-lower-triangular Toeplitz matrix built from the binary expansion of
//! the fine gain. Addition never carries; superposition is XOR per level.
//!
//! Matrices are dense with bit-packed rows; dimensions stay in the hundreds,
//! so no sparse structure is needed.

use crate::error::Error;
use std::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// A fixed-length bit vector over F2. Level 1 is the most significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Vector {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        GF2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Build from 0/1 entries, entry 0 holding level 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = GF2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i + 1, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `level` (1-based).
    pub fn get(&self, level: usize) -> bool {
        assert!(level >= 1 && level <= self.len, "level out of range");
        let i = level - 1;
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, level: usize, value: bool) {
        assert!(level >= 1 && level <= self.len, "level out of range");
        let i = level - 1;
        if value {
            self.words[i / WORD] |= 1 << (i % WORD);
        } else {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn xor_assign(&mut self, other: &GF2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first set level, `None` for the zero vector.
    /// Unit-lower-triangular matrices preserve this index.
    pub fn leading_level(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize + 1);
            }
        }
        None
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |l| self.get(l))
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .iter_bits()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        write!(f, "GF2Vector[{s}]")
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Dense F2 matrix with bit-packed rows (bit `j` of row `i` = entry `(i, j)`,
/// both 0-based internally; public accessors are 1-based like levels).
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = words_for(cols).max(1);
        GF2Matrix {
            rows,
            cols,
            row_words,
            data: vec![0; rows * row_words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GF2Matrix::zeros(n, n);
        for i in 1..=n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row >= 1 && row <= self.rows && col >= 1 && col <= self.cols);
        let (r, c) = (row - 1, col - 1);
        (self.data[r * self.row_words + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row >= 1 && row <= self.rows && col >= 1 && col <= self.cols);
        let (r, c) = (row - 1, col - 1);
        let w = &mut self.data[r * self.row_words + c / WORD];
        if value {
            *w |= 1 << (c % WORD);
        } else {
            *w &= !(1 << (c % WORD));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.row_words..(r + 1) * self.row_words]
    }

    /// Assemble a matrix from column vectors of equal length.
    pub fn from_columns(cols: &[GF2Vector]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = GF2Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 1..=rows {
                if col.get(i) {
                    m.set(i, j + 1, true);
                }
            }
        }
        m
    }

    pub fn column(&self, col: usize) -> GF2Vector {
        let mut v = GF2Vector::zeros(self.rows);
        for i in 1..=self.rows {
            if self.get(i, col) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn mul_vec(&self, x: &GF2Vector) -> GF2Vector {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        let mut y = GF2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (w, xw) in self.row(i).iter().zip(&x.words) {
                acc ^= w & xw;
            }
            if acc.count_ones() % 2 == 1 {
                y.set(i + 1, true);
            }
        }
        y
    }

    pub fn mul(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = GF2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 1..=self.cols {
                if self.get(i + 1, k) {
                    for w in 0..other.row_words {
                        out.data[i * out.row_words + w] ^=
                            other.data[(k - 1) * other.row_words + w];
                    }
                }
            }
        }
        out
    }

    /// Rank over F2 by row elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / WORD, col % WORD);
            let pivot = (rank..rows.len()).find(|&r| (rows[r][w] >> b) & 1 == 1);
            let Some(p) = pivot else { continue };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (row[w] >> b) & 1 == 1 {
                    for (a, bw) in row.iter_mut().zip(&pivot_row) {
                        *a ^= bw;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Solve `self * x = rhs`. Returns one solution or `None` when the system
    /// is inconsistent.
    pub fn solve(&self, rhs: &GF2Vector) -> Option<GF2Vector> {
        assert_eq!(self.rows, rhs.len(), "dimension mismatch");
        // Augmented elimination over the columns.
        let mut rows: Vec<(Vec<u64>, bool)> = (0..self.rows)
            .map(|r| (self.row(r).to_vec(), rhs.get(r + 1)))
            .collect();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / WORD, col % WORD);
            let pivot = (rank..rows.len()).find(|&r| (rows[r].0[w] >> b) & 1 == 1);
            let Some(p) = pivot else { continue };
            rows.swap(rank, p);
            let (pr, pb) = rows[rank].clone();
            for (r, (row, rb)) in rows.iter_mut().enumerate() {
                if r != rank && (row[w] >> b) & 1 == 1 {
                    for (a, bw) in row.iter_mut().zip(&pr) {
                        *a ^= bw;
                    }
                    *rb ^= pb;
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        // Inconsistent if a zero row has rhs 1.
        for (row, rb) in rows.iter().skip(rank) {
            if *rb && row.iter().all(|&w| w == 0) {
                return None;
            }
        }
        let mut x = GF2Vector::zeros(self.cols);
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            if rows[r].1 {
                x.set(col + 1, true);
            }
        }
        Some(x)
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for i in 1..=self.rows {
            let s: String = (1..=self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Fine-gain expansions
// ---------------------------------------------------------------------------

/// Binary expansion of a fine gain `g in (1, 2]`: `g ~ 1 + sum bits[i] 2^-(i+1)`.
///
/// Values are truncated (floor) to `depth` bits so results are reproducible
/// bit-exactly; bits beyond the receiver resolution cannot affect the
/// truncated output anyway.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FineGainExpansion {
    bits: Vec<u8>,
}

impl FineGainExpansion {
    /// Expand a real gain. `g = 2` maps to the all-ones expansion.
    pub fn from_value(g: f64, depth: usize) -> Result<Self, Error> {
        if !(g > 1.0 && g <= 2.0) {
            return Err(Error::domain(format!("fine gain {g} outside (1, 2]")));
        }
        let scale = (1u128) << depth.min(100);
        let mut scaled = ((g - 1.0) * scale as f64).floor() as u128;
        if scaled >= scale {
            scaled = scale - 1;
        }
        let bits = (0..depth)
            .map(|i| ((scaled >> (depth - 1 - i)) & 1) as u8)
            .collect();
        Ok(FineGainExpansion { bits })
    }

    /// Use explicit expansion bits (`bits[0]` is `[g]_1`, weight 1/2).
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0/1");
        FineGainExpansion { bits }
    }

    /// The linear-deterministic limit: all expansion bits zero.
    pub fn ld_limit(depth: usize) -> Self {
        FineGainExpansion {
            bits: vec![0; depth],
        }
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> u8 {
        assert!(i >= 1, "expansion bits are 1-indexed");
        self.bits.get(i - 1).copied().unwrap_or(0)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_ld_limit(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// `1 + sum bits[i] 2^-(i+1)` over the stored depth.
    pub fn reconstruct(&self) -> f64 {
        let mut v = 1.0;
        for (i, &b) in self.bits.iter().enumerate() {
            if b == 1 {
                v += 0.5_f64.powi(i as i32 + 1);
            }
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Channel matrices
// ---------------------------------------------------------------------------

/// The `q x q` matrix with ones on the `s`-th subdiagonal. Applying it shifts
/// a vector down by `s` levels, dropping the lowest `s` bits and zero-filling
/// the top.
pub fn make_shift_matrix(q: usize, s: usize) -> Result<GF2Matrix, Error> {
    if q == 0 {
        return Err(Error::invalid_dimension("shift matrix needs q >= 1"));
    }
    if s > q {
        return Err(Error::invalid_dimension(format!(
            "shift {s} exceeds dimension {q}"
        )));
    }
    let mut m = GF2Matrix::zeros(q, q);
    for col in 1..=q.saturating_sub(s) {
        m.set(col + s, col, true);
    }
    Ok(m)
}

/// The `q x q` unit-lower-triangular Toeplitz matrix with first column
/// `[1, [g]_1, ..., [g]_{q-1}]`.
pub fn make_lt_matrix(g: &FineGainExpansion, q: usize) -> Result<GF2Matrix, Error> {
    if q == 0 {
        return Err(Error::invalid_dimension("channel matrix needs q >= 1"));
    }
    if g.depth() + 1 < q {
        return Err(Error::invalid_dimension(format!(
            "expansion depth {} too small for dimension {q}",
            g.depth()
        )));
    }
    let mut m = GF2Matrix::zeros(q, q);
    for col in 1..=q {
        m.set(col, col, true);
        for row in col + 1..=q {
            if g.bit(row - col) == 1 {
                m.set(row, col, true);
            }
        }
    }
    Ok(m)
}

/// Rank over F2; full column rank means the column map is injective.
pub fn gf2_rank(m: &GF2Matrix) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn shift_matrix_zero_is_identity() {
        let s = make_shift_matrix(3, 0).unwrap();
        assert_eq!(s, GF2Matrix::identity(3));
    }

    #[test]
    fn shift_by_one_drops_lowest_bit() {
        let s = make_shift_matrix(3, 1).unwrap();
        let x = GF2Vector::from_bits(&[1, 0, 1]);
        let y = s.mul_vec(&x);
        assert_eq!(y, GF2Vector::from_bits(&[0, 1, 0]));
    }

    #[test]
    fn full_shift_truncates_everything() {
        let s = make_shift_matrix(3, 3).unwrap();
        for bits in [[1, 1, 1], [1, 0, 1], [0, 1, 0]] {
            let y = s.mul_vec(&GF2Vector::from_bits(&bits));
            assert!(y.is_zero());
        }
    }

    #[test]
    fn shift_matrix_rejects_bad_dims() {
        assert!(make_shift_matrix(0, 0).is_err());
        assert!(make_shift_matrix(3, 4).is_err());
    }

    #[test]
    fn shift_composition() {
        // S^a * S^b = S^(a+b) when a+b <= q.
        let q = 9;
        for a in 0..=q {
            for b in 0..=(q - a) {
                let sa = make_shift_matrix(q, a).unwrap();
                let sb = make_shift_matrix(q, b).unwrap();
                let sab = make_shift_matrix(q, a + b).unwrap();
                assert_eq!(sa.mul(&sb), sab, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn lt_matrix_ld_limit_is_identity() {
        let g = FineGainExpansion::ld_limit(8);
        let h = make_lt_matrix(&g, 4).unwrap();
        assert_eq!(h, GF2Matrix::identity(4));
    }

    #[test]
    fn lt_matrix_from_value() {
        // 1.5 -> expansion bits [1, 0]; 1.75 -> [1, 1].
        let g = FineGainExpansion::from_value(1.5, 2).unwrap();
        assert_eq!(g.bits(), &[1, 0]);
        let h = make_lt_matrix(&g, 3).unwrap();
        assert!(h.get(2, 1) && !h.get(3, 1) && h.get(3, 2));

        let g = FineGainExpansion::from_value(1.75, 2).unwrap();
        assert_eq!(g.bits(), &[1, 1]);
        let h = make_lt_matrix(&g, 3).unwrap();
        assert!(h.get(2, 1) && h.get(3, 1) && h.get(3, 2));
    }

    #[test]
    fn lt_matrix_rejects_out_of_range_gain() {
        assert!(FineGainExpansion::from_value(0.9, 4).is_err());
        assert!(FineGainExpansion::from_value(2.5, 4).is_err());
        assert!(FineGainExpansion::from_value(1.0, 4).is_err());
    }

    #[test]
    fn expansion_reconstruction_error_bound() {
        let depth = 16;
        let mut rng = SplitMix64::new(11);
        for _ in 0..500 {
            let g = 1.0 + rng.next_f64().max(1e-12);
            let e = FineGainExpansion::from_value(g, depth).unwrap();
            let err = g - e.reconstruct();
            assert!(
                err >= 0.0 && err < 0.5_f64.powi(depth as i32),
                "g={g} err={err}"
            );
        }
        // Boundary g = 2 truncates to all ones, off by exactly 2^-depth.
        let e = FineGainExpansion::from_value(2.0, depth).unwrap();
        assert!(e.bits().iter().all(|&b| b == 1));
        assert!((2.0 - e.reconstruct() - 0.5_f64.powi(depth as i32)).abs() < 1e-15);
    }

    #[test]
    fn rank_identity_and_duplicates() {
        assert_eq!(gf2_rank(&GF2Matrix::identity(4)), 4);
        let mut m = GF2Matrix::zeros(4, 3);
        // Two identical columns.
        for r in [1, 3] {
            m.set(r, 1, true);
            m.set(r, 2, true);
        }
        m.set(2, 3, true);
        assert!(gf2_rank(&m) < 3);
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn rank_matches_kernel_enumeration() {
        // rank = cols - dim(kernel), kernel found by brute force over 2^cols inputs.
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let rows = 6;
            let cols = 4;
            let mut m = GF2Matrix::zeros(rows, cols);
            for r in 1..=rows {
                for c in 1..=cols {
                    if rng.next_u64() & 1 == 1 {
                        m.set(r, c, true);
                    }
                }
            }
            let mut kernel = 0usize;
            for mask in 0..(1u32 << cols) {
                let mut x = GF2Vector::zeros(cols);
                for c in 0..cols {
                    if (mask >> c) & 1 == 1 {
                        x.set(c + 1, true);
                    }
                }
                if m.mul_vec(&x).is_zero() {
                    kernel += 1;
                }
            }
            let kernel_dim = kernel.trailing_zeros() as usize;
            assert_eq!(gf2_rank(&m), cols - kernel_dim);
        }
    }

    #[test]
    fn unit_lower_triangular_is_bijective() {
        // Solving H y = H x returns y = x for every x.
        let mut rng = SplitMix64::new(77);
        for _ in 0..30 {
            let q = 7;
            let bits: Vec<u8> = (0..q).map(|_| (rng.next_u64() & 1) as u8).collect();
            let h = make_lt_matrix(&FineGainExpansion::from_bits(bits), q).unwrap();
            assert_eq!(gf2_rank(&h), q);
            for _ in 0..20 {
                let mut x = GF2Vector::zeros(q);
                for l in 1..=q {
                    if rng.next_u64() & 1 == 1 {
                        x.set(l, true);
                    }
                }
                let rhs = h.mul_vec(&x);
                let y = h.solve(&rhs).expect("invertible");
                assert_eq!(y, x);
            }
        }
    }

    #[test]
    fn lt_matrix_preserves_leading_level() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..100 {
            let q = 10;
            let bits: Vec<u8> = (0..q).map(|_| (rng.next_u64() & 1) as u8).collect();
            let h = make_lt_matrix(&FineGainExpansion::from_bits(bits), q).unwrap();
            let mut x = GF2Vector::zeros(q);
            for l in 1..=q {
                if rng.next_u64().is_multiple_of(3) {
                    x.set(l, true);
                }
            }
            assert_eq!(h.mul_vec(&x).leading_level(), x.leading_level());
        }
    }

    #[test]
    fn rank_brute_force_max_independent_subset() {
        // rank equals the size of a maximal independent column subset.
        let mut rng = SplitMix64::new(21);
        for _ in 0..20 {
            let rows = 6;
            let cols = 5;
            let mut m = GF2Matrix::zeros(rows, cols);
            for r in 1..=rows {
                for c in 1..=cols {
                    if rng.next_u64().is_multiple_of(3) {
                        m.set(r, c, true);
                    }
                }
            }
            let mut best = 0;
            for mask in 0u32..(1 << cols) {
                let chosen: Vec<GF2Vector> = (0..cols)
                    .filter(|c| (mask >> c) & 1 == 1)
                    .map(|c| m.column(c + 1))
                    .collect();
                if chosen.is_empty() {
                    continue;
                }
                let sub = GF2Matrix::from_columns(&chosen);
                if gf2_rank(&sub) == chosen.len() {
                    best = best.max(chosen.len());
                }
            }
            assert_eq!(gf2_rank(&m), best);
        }
    }
}
