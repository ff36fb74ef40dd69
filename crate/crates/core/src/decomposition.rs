//! Dof-level subdomain sets, algebraic overlap and restriction operators.
//!
//! All index sets here refer to free dofs, i.e. rows of the reduced system
//! [`FreeSystem::matrix`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::{FeSpace, FreeSystem};
use crate::partition::Partition;
use crate::sparse::CsrMatrix;

/// Free dofs of the elements of each subdomain, ascending. Constrained dofs
/// belong to no set.
pub fn subdomain_dofs(space: &FeSpace, partition: &Partition, system: &FreeSystem) -> Vec<Vec<usize>> {
    let free_index = system.free_index();
    (0..partition.num_parts())
        .into_par_iter()
        .map(|p| {
            let mut dofs: Vec<usize> = partition
                .elements(p)
                .iter()
                .flat_map(|&t| space.element_dofs(t))
                .map(|d| free_index[d])
                .filter(|&i| i != usize::MAX)
                .collect();
            dofs.sort_unstable();
            dofs.dedup();
            dofs
        })
        .collect()
}

/// Grows each set by `layers` breadth-first hops through the stored pattern of `a`.
pub fn extend_overlap(a: &CsrMatrix, base: &[Vec<usize>], layers: usize) -> Vec<Vec<usize>> {
    base.par_iter()
        .map(|set| {
            let mut inside = vec![false; a.nrows()];
            for &i in set {
                inside[i] = true;
            }
            let mut all = set.clone();
            let mut frontier = set.clone();
            for _ in 0..layers {
                let mut next = Vec::new();
                for &i in &frontier {
                    for &j in a.row(i).0 {
                        if !inside[j] {
                            inside[j] = true;
                            next.push(j);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                all.extend_from_slice(&next);
                frontier = next;
            }
            all.sort_unstable();
            all
        })
        .collect()
}

/// The 0/1 matrix `R` with `R x = x[set]`, one unit entry per row.
pub fn restriction(set: &[usize], n: usize) -> Result<CsrMatrix> {
    for w in set.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Config("restriction set must be strictly ascending".into()));
        }
    }
    if let Some(&bad) = set.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    CsrMatrix::new(
        set.len(),
        n,
        (0..=set.len()).collect(),
        set.to_vec(),
        vec![1.0; set.len()],
    )
}

/// Non-overlapping and overlapping subdomain dof sets.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Free dofs of each subdomain's elements.
    pub base: Vec<Vec<usize>>,
    /// Each free dof owned by the lowest-index subdomain touching it.
    pub owned: Vec<Vec<usize>>,
    /// `base` grown by `layers` algebraic layers.
    pub overlapping: Vec<Vec<usize>>,
    pub layers: usize,
    pub num_free: usize,
}

impl Decomposition {
    pub fn build(space: &FeSpace, partition: &Partition, system: &FreeSystem, layers: usize) -> Self {
        let base = subdomain_dofs(space, partition, system);
        let overlapping = extend_overlap(&system.matrix, &base, layers);
        let n = system.num_free();
        let mut owner = vec![usize::MAX; n];
        for (p, set) in base.iter().enumerate() {
            for &i in set {
                if owner[i] == usize::MAX {
                    owner[i] = p;
                }
            }
        }
        let mut owned = vec![Vec::new(); base.len()];
        for (i, &p) in owner.iter().enumerate() {
            if p != usize::MAX {
                owned[p].push(i);
            }
        }
        Self {
            base,
            owned,
            overlapping,
            layers,
            num_free: n,
        }
    }

    pub fn num_subdomains(&self) -> usize {
        self.overlapping.len()
    }

    /// `sum_i R_i^T R_i` diagonal: how many overlapping sets contain each dof.
    pub fn multiplicity(&self) -> Vec<usize> {
        let mut m = vec![0; self.num_free];
        for set in &self.overlapping {
            for &i in set {
                m[i] += 1;
            }
        }
        m
    }

    /// Plain-text dump: one line per subdomain listing its overlapping dofs.
    pub fn dump<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        for (p, set) in self.overlapping.iter().enumerate() {
            write!(w, "{p}:")?;
            for i in set {
                write!(w, " {i}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
