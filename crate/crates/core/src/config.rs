use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full associativity is checked for tables up to this order; larger tables
/// are rejected outright.
pub const ASSOCIATIVITY_CHECK_CAP: usize = 256;

/// Size limits shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group that may be constructed from generators or families.
    pub max_order: usize,
    /// Largest group whose subgroup lattice may be enumerated.
    pub max_lattice_order: usize,
    /// Largest number of subgroups a lattice may contain.
    pub max_lattice: usize,
    /// Largest point set accepted by closure and coordinate-group code.
    pub max_width: usize,
    /// Element-operation budget for a single top-level computation.
    pub budget: u64,
    /// Cap on the number of words produced by the word enumerator.
    pub max_words: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 128,
            max_lattice_order: 128,
            max_lattice: 50_000,
            max_width: 4,
            budget: 200_000_000,
            max_words: 2_000_000,
        }
    }
}

impl Limits {
    pub fn budget(&self) -> Budget {
        Budget::new(self.budget)
    }

    pub fn check_width(&self, width: usize) -> Result<()> {
        if width > self.max_width {
            return Err(Error::WidthCapExceeded {
                width,
                cap: self.max_width,
            });
        }
        Ok(())
    }
}

/// A per-call counter of element operations.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: Cell::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn charge(&self, ops: u64) -> Result<()> {
        let used = self.used.get().saturating_add(ops);
        self.used.set(used);
        if used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}
