use crate::error::{Error, Result};

/// Hard ceiling on the number of atoms an interpretation can carry.
///
/// Interpretations are packed into a single machine word.
pub const MAX_ATOMS: usize = 64;

/// Resource caps applied by every enumerating or materializing operation.
///
/// Operations refuse with [`Error::ResourceCap`] instead of degrading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest atom count for which a transition graph (2^n states) is built.
    pub max_atoms_graph: usize,
    /// Largest atom count for exhaustive scans over two-valued interpretations.
    pub max_atoms_enum2: usize,
    /// Largest atom count for exhaustive scans over three-valued interpretations.
    pub max_atoms_enum3: usize,
    /// Largest atom count accepted by the brute-force covering oracle.
    pub max_atoms_oracle: usize,
    /// Largest rule count the least-fixpoint transformation may accumulate.
    pub max_lfp_rules: usize,
    /// Largest number of members enumerated from a single state cube.
    pub max_cset: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atoms_graph: 16,
            max_atoms_enum2: 20,
            max_atoms_enum3: 12,
            max_atoms_oracle: 6,
            max_lfp_rules: 100_000,
            max_cset: 1 << 20,
        }
    }
}

impl Limits {
    pub(crate) fn graph(&self, n: usize) -> Result<()> {
        cap_atoms("transition graph atom count", self.max_atoms_graph.min(31), n)
    }

    pub(crate) fn enum2(&self, n: usize) -> Result<()> {
        cap_atoms("two-valued scan atom count", self.max_atoms_enum2.min(40), n)
    }

    pub(crate) fn enum3(&self, n: usize) -> Result<()> {
        cap_atoms("three-valued scan atom count", self.max_atoms_enum3.min(24), n)
    }

    pub(crate) fn oracle(&self, n: usize) -> Result<()> {
        cap_atoms("oracle atom count", self.max_atoms_oracle.min(24), n)
    }
}

fn cap_atoms(what: &'static str, limit: usize, n: usize) -> Result<()> {
    if n > limit {
        Err(Error::cap(what, limit, n))
    } else {
        Ok(())
    }
}
