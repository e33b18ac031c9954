//! Channel configurations for the deterministic models.
//!
//! Gain notation: `n11`/`n12` are the direct coarse gains of the strong and
//! weak user in cell 1 (`n11 >= n12`), likewise `n21`/`n22` for cell 2.
//! `i21` is the interference level reaching receiver 1 from cell 2 (both
//! cell-2 users arrive with the same coarse gain there), `i12` the level
//! reaching receiver 2 from cell 1.

use crate::error::Error;

/// Cell index, used wherever per-cell quantities are requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    One,
    Two,
}

impl Cell {
    pub fn other(self) -> Cell {
        match self {
            Cell::One => Cell::Two,
            Cell::Two => Cell::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Cell::One => 0,
            Cell::Two => 1,
        }
    }
}

/// Full two-cell configuration with per-cell direct gains and one
/// interference level per receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImacConfig {
    pub n11: u32,
    pub n12: u32,
    pub n21: u32,
    pub n22: u32,
    /// Interference arriving at receiver 1 (from cell 2).
    pub i21: u32,
    /// Interference arriving at receiver 2 (from cell 1).
    pub i12: u32,
}

impl ImacConfig {
    pub fn new(n11: u32, n12: u32, n21: u32, n22: u32, i21: u32, i12: u32) -> Result<Self, Error> {
        if n11 < n12 || n21 < n22 {
            return Err(Error::invalid_input(
                "direct gains must satisfy n11 >= n12 and n21 >= n22",
            ));
        }
        Ok(ImacConfig {
            n11,
            n12,
            n21,
            n22,
            i21,
            i12,
        })
    }

    pub fn strong(&self, cell: Cell) -> u32 {
        match cell {
            Cell::One => self.n11,
            Cell::Two => self.n21,
        }
    }

    pub fn weakuser(&self, cell: Cell) -> u32 {
        match cell {
            Cell::One => self.n12,
            Cell::Two => self.n22,
        }
    }

    /// Gain difference of the two direct links in a cell.
    pub fn delta(&self, cell: Cell) -> u32 {
        self.strong(cell) - self.weakuser(cell)
    }

    /// Interference arriving at this cell's receiver.
    pub fn incoming(&self, cell: Cell) -> u32 {
        match cell {
            Cell::One => self.i21,
            Cell::Two => self.i12,
        }
    }

    /// Interference this cell causes at the other receiver.
    pub fn outgoing(&self, cell: Cell) -> u32 {
        self.incoming(cell.other())
    }

    /// Weak interference in the strict sense: the summed interference levels
    /// stay below the weakest direct link of either cell.
    pub fn is_weak_strict(&self) -> bool {
        self.i21 + self.i12 <= self.n12.min(self.n22)
    }

    /// Weak interference as required by the general (possibly asymmetric)
    /// constant-gap result: below the strongest user of either cell.
    pub fn is_weak(&self) -> bool {
        self.i21 + self.i12 <= self.n11.min(self.n21)
    }

    pub fn is_symmetric(&self) -> bool {
        self.n11 == self.n21 && self.n12 == self.n22 && self.i21 == self.i12
    }

    pub fn as_symmetric(&self) -> Option<SymmetricConfig> {
        if self.is_symmetric() {
            Some(SymmetricConfig::new(self.n11, self.n12, self.i21))
        } else {
            None
        }
    }
}

/// Symmetric configuration: both cells share `n1 >= n2` and interference `ni`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetricConfig {
    pub n1: u32,
    pub n2: u32,
    pub ni: u32,
}

impl SymmetricConfig {
    pub fn new(n1: u32, n2: u32, ni: u32) -> Self {
        assert!(n1 >= n2, "symmetric config needs n1 >= n2");
        SymmetricConfig { n1, n2, ni }
    }

    pub fn checked(n1: u32, n2: u32, ni: u32) -> Result<Self, Error> {
        if n1 < n2 {
            return Err(Error::invalid_input("symmetric config needs n1 >= n2"));
        }
        Ok(SymmetricConfig { n1, n2, ni })
    }

    pub fn to_full(self) -> ImacConfig {
        ImacConfig {
            n11: self.n1,
            n12: self.n2,
            n21: self.n1,
            n22: self.n2,
            i21: self.ni,
            i12: self.ni,
        }
    }

    /// Interference-to-signal ratio `ni / n1`.
    pub fn alpha(&self) -> f64 {
        if self.n1 == 0 {
            0.0
        } else {
            self.ni as f64 / self.n1 as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weak_predicates() {
        let c = ImacConfig::new(22, 20, 22, 20, 10, 10).unwrap();
        assert!(c.is_weak_strict());
        assert!(c.is_weak());
        let c = ImacConfig::new(22, 11, 22, 11, 10, 10).unwrap();
        assert!(!c.is_weak_strict());
        assert!(c.is_weak());
    }

    #[test]
    fn orientation_helpers() {
        let c = ImacConfig::new(10, 7, 9, 8, 3, 4).unwrap();
        assert_eq!(c.delta(Cell::One), 3);
        assert_eq!(c.delta(Cell::Two), 1);
        assert_eq!(c.incoming(Cell::One), 3);
        assert_eq!(c.outgoing(Cell::One), 4);
        assert_eq!(c.incoming(Cell::Two), 4);
        assert_eq!(c.outgoing(Cell::Two), 3);
    }

    #[test]
    fn rejects_misordered_gains() {
        assert!(ImacConfig::new(5, 6, 5, 5, 0, 0).is_err());
        assert!(SymmetricConfig::checked(4, 5, 0).is_err());
    }
}
