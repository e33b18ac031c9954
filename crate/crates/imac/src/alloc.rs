//! Explicit per-signal level sets.
//!
//! A level allocation says, for each of the four transmit signals, which bit
//! levels carry information. Rate formulas only need the counts; decodability
//! validation needs the positions, so schemes materialize them here and the
//! oracle consumes them.

use crate::config::Cell;
use crate::error::Error;

/// Used bit levels of one cell's two signals. Indices are 1-based within the
/// transmitted vector (level 1 = most significant bit); the strong user's
/// vector has `n_strong` levels, the weak user's `n_weak`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLevels {
    x1_bits: Vec<usize>,
    x2_bits: Vec<usize>,
    n_strong: usize,
    n_weak: usize,
}

impl CellLevels {
    pub fn new(
        mut x1_bits: Vec<usize>,
        mut x2_bits: Vec<usize>,
        n_strong: usize,
        n_weak: usize,
    ) -> Result<Self, Error> {
        x1_bits.sort_unstable();
        x2_bits.sort_unstable();
        for (bits, len, who) in [(&x1_bits, n_strong, "strong"), (&x2_bits, n_weak, "weak")] {
            if bits.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid_input(format!("duplicate {who}-user level")));
            }
            if bits.iter().any(|&b| b == 0 || b > len) {
                return Err(Error::invalid_dimension(format!(
                    "{who}-user level outside 1..={len}"
                )));
            }
        }
        Ok(CellLevels {
            x1_bits,
            x2_bits,
            n_strong,
            n_weak,
        })
    }

    pub fn empty(n_strong: usize, n_weak: usize) -> Self {
        CellLevels {
            x1_bits: Vec::new(),
            x2_bits: Vec::new(),
            n_strong,
            n_weak,
        }
    }

    pub fn x1_bits(&self) -> &[usize] {
        &self.x1_bits
    }

    pub fn x2_bits(&self) -> &[usize] {
        &self.x2_bits
    }

    pub fn n_strong(&self) -> usize {
        self.n_strong
    }

    pub fn n_weak(&self) -> usize {
        self.n_weak
    }

    pub fn bits(&self) -> usize {
        self.x1_bits.len() + self.x2_bits.len()
    }

    /// Levels of this cell visible at the other receiver: the union of both
    /// users' used levels within the outgoing interference span. Both users
    /// arrive there with the same coarse gain, so the sets merge.
    pub fn footprint(&self, outgoing: usize) -> Vec<usize> {
        let mut f: Vec<usize> = self
            .x1_bits
            .iter()
            .chain(&self.x2_bits)
            .copied()
            .filter(|&b| b <= outgoing)
            .collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

/// Level sets for both cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAllocation {
    cells: [CellLevels; 2],
}

impl LevelAllocation {
    pub fn new(cell1: CellLevels, cell2: CellLevels) -> Self {
        LevelAllocation {
            cells: [cell1, cell2],
        }
    }

    pub fn symmetric(cell: CellLevels) -> Self {
        LevelAllocation {
            cells: [cell.clone(), cell],
        }
    }

    pub fn cell(&self, cell: Cell) -> &CellLevels {
        &self.cells[cell.index()]
    }

    pub fn total_bits(&self) -> usize {
        self.cells.iter().map(|c| c.bits()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_ranges_and_duplicates() {
        assert!(CellLevels::new(vec![1, 2, 2], vec![], 4, 3).is_err());
        assert!(CellLevels::new(vec![5], vec![], 4, 3).is_err());
        assert!(CellLevels::new(vec![], vec![4], 4, 3).is_err());
        assert!(CellLevels::new(vec![4, 1], vec![3], 4, 3).is_ok());
    }

    #[test]
    fn footprint_merges_users() {
        let c = CellLevels::new(vec![1, 2, 6], vec![1, 3], 6, 5).unwrap();
        assert_eq!(c.footprint(3), vec![1, 2, 3]);
        assert_eq!(c.footprint(0), Vec::<usize>::new());
    }
}
