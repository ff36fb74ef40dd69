//! Reduced-dimension GDSW coarse space.
//!
//! Each coarse node contributes one basis function per translation mode
//! `e_1, e_2, e_3`. On the interface a basis function equals the translation
//! scaled by the partition of unity over the coarse node's nec and all of its
//! offspring; inside the subdomains it is the discrete harmonic extension
//! `Phi_I = -A_II^{-1} A_IG Phi_G`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::space::COMPONENTS;
use crate::fem::{FeSpace, FreeSystem};
use crate::interface::InterfaceStructure;
use crate::sparse::ldlt::factor_spd;
use crate::sparse::CsrMatrix;

/// Relative magnitude below which basis entries are dropped.
pub const DROP_TOLERANCE: f64 = 1e-14;
/// Relative asymmetry tolerated in the coarse matrix before averaging.
pub const COARSE_SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Interface/interior split of the free dofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofSplit {
    /// Free indices of interface dofs, ascending.
    pub gamma: Vec<usize>,
    /// Free indices of the remaining dofs, ascending.
    pub interior: Vec<usize>,
}

impl DofSplit {
    pub fn new(structure: &InterfaceStructure, space: &FeSpace, system: &FreeSystem) -> Result<Self> {
        let free_index = system.free_index();
        let mut is_gamma = vec![false; system.num_free()];
        let mut gamma = Vec::with_capacity(COMPONENTS * structure.gamma().len());
        for &node in structure.gamma() {
            for c in 0..COMPONENTS {
                let i = free_index[space.dof(c, node)];
                if i == usize::MAX {
                    return Err(Error::InconsistentInterface(format!(
                        "interface node {node} has a constrained component"
                    )));
                }
                is_gamma[i] = true;
                gamma.push(i);
            }
        }
        gamma.sort_unstable();
        let interior = (0..system.num_free()).filter(|&i| !is_gamma[i]).collect();
        Ok(Self { gamma, interior })
    }
}

/// `Phi_G`: rows follow `split.gamma`, three columns per coarse node
/// (column `3 c + j` carries translation `j` of coarse node `c`).
pub fn build_interface_operator(
    structure: &InterfaceStructure,
    space: &FeSpace,
    system: &FreeSystem,
    split: &DofSplit,
) -> Result<CsrMatrix> {
    let nc = structure.num_coarse_nodes();
    if nc == 0 && !split.gamma.is_empty() {
        return Err(Error::InconsistentInterface(
            "no coarse nodes for a non-empty interface".into(),
        ));
    }
    let free_index = system.free_index();
    let mut row_of = vec![usize::MAX; system.num_free()];
    for (r, &i) in split.gamma.iter().enumerate() {
        row_of[i] = r;
    }
    let mut triplets = Vec::new();
    for (ci, offspring) in structure.coarse.offspring.iter().enumerate() {
        let own = structure.coarse.coarse[ci];
        for &k in std::iter::once(&own).chain(offspring) {
            for &node in &structure.necs[k].nodes {
                let w = structure.pou_value(node)?;
                for j in 0..COMPONENTS {
                    let row = row_of[free_index[space.dof(j, node)]];
                    triplets.push((row, COMPONENTS * ci + j, w));
                }
            }
        }
    }
    CsrMatrix::from_triplets(split.gamma.len(), COMPONENTS * nc, &triplets)
}

/// Assembles `Phi` from `Phi_G` and its discrete harmonic extension.
///
/// `A_II` is block diagonal over subdomains; a single factorization handles
/// all blocks since the ordering keeps disconnected blocks separate.
pub fn harmonic_extension(a: &CsrMatrix, phi_gamma: &CsrMatrix, split: &DofSplit) -> Result<CsrMatrix> {
    let n = a.nrows();
    let ncols = phi_gamma.ncols();
    let a_ii = a.principal_submatrix(&split.interior)?;
    let a_ig = a.submatrix(&split.interior, &split.gamma)?;
    let rhs = a_ig.matmul(phi_gamma)?.transpose();
    let gamma_t = phi_gamma.transpose();
    let f_ii = if split.interior.is_empty() {
        None
    } else {
        Some(factor_spd(&a_ii)?)
    };

    let columns: Vec<Result<Vec<(usize, f64)>>> = (0..ncols)
        .into_par_iter()
        .map(|c| {
            let mut col: Vec<(usize, f64)> = Vec::new();
            let (grows, gvals) = gamma_t.row(c);
            for (&r, &v) in grows.iter().zip(gvals) {
                col.push((split.gamma[r], v));
            }
            if let Some(f) = &f_ii {
                let mut y = vec![0.0; split.interior.len()];
                let (rrows, rvals) = rhs.row(c);
                for (&r, &v) in rrows.iter().zip(rvals) {
                    y[r] = -v;
                }
                f.solve_in_place(&mut y)?;
                for (r, &v) in y.iter().enumerate() {
                    if v != 0.0 {
                        col.push((split.interior[r], v));
                    }
                }
            }
            let cmax = col.iter().fold(0.0f64, |m, e| m.max(e.1.abs()));
            col.retain(|e| e.1.abs() >= DROP_TOLERANCE * cmax);
            Ok(col)
        })
        .collect();

    let mut triplets = Vec::new();
    for (c, col) in columns.into_iter().enumerate() {
        for (r, v) in col? {
            triplets.push((r, c, v));
        }
    }
    CsrMatrix::from_triplets(n, ncols, &triplets)
}

/// `A_0 = Phi^T A Phi`, symmetrized after checking the residue is negligible.
pub fn coarse_matrix(a: &CsrMatrix, phi: &CsrMatrix) -> Result<CsrMatrix> {
    let a0 = phi.transpose().matmul(&a.matmul(phi)?)?;
    let scale = a0.max_abs().max(f64::MIN_POSITIVE);
    let asym = a0.asymmetry();
    if asym > COARSE_SYMMETRY_TOLERANCE * scale {
        return Err(Error::CoarseAsymmetry(asym / scale));
    }
    let at = a0.transpose();
    let dense: Vec<(usize, usize, f64)> = (0..a0.nrows())
        .flat_map(|i| {
            let (cols, vals) = a0.row(i);
            cols.iter()
                .zip(vals)
                .map(move |(&j, &v)| (i, j, 0.5 * v))
                .collect::<Vec<_>>()
        })
        .chain((0..at.nrows()).flat_map(|i| {
            let (cols, vals) = at.row(i);
            cols.iter()
                .zip(vals)
                .map(move |(&j, &v)| (i, j, 0.5 * v))
                .collect::<Vec<_>>()
        }))
        .collect();
    CsrMatrix::from_triplets(a0.nrows(), a0.ncols(), &dense)
}

/// The assembled coarse space.
#[derive(Debug, Clone)]
pub struct CoarseBasis {
    pub split: DofSplit,
    pub phi_gamma: CsrMatrix,
    /// Free dofs x coarse dofs.
    pub phi: CsrMatrix,
    pub a0: CsrMatrix,
    pub num_coarse_nodes: usize,
}

impl CoarseBasis {
    pub fn build(
        system: &FreeSystem,
        space: &FeSpace,
        structure: &InterfaceStructure,
    ) -> Result<Self> {
        let split = DofSplit::new(structure, space, system)?;
        let phi_gamma = build_interface_operator(structure, space, system, &split)?;
        let phi = harmonic_extension(&system.matrix, &phi_gamma, &split)?;
        let a0 = coarse_matrix(&system.matrix, &phi)?;
        Ok(Self {
            split,
            phi_gamma,
            phi,
            a0,
            num_coarse_nodes: structure.num_coarse_nodes(),
        })
    }

    pub fn dim(&self) -> usize {
        self.phi.ncols()
    }

    /// `max |A_II Phi_I + A_IG Phi_G|`, i.e. the interior rows of `A Phi`.
    pub fn harmonic_residual(&self, a: &CsrMatrix) -> Result<f64> {
        let aphi = a.matmul(&self.phi)?;
        let mut worst = 0.0f64;
        for &i in &self.split.interior {
            for &v in aphi.row(i).1 {
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_matrix_of_unit_columns() {
        let a = CsrMatrix::from_dense(&[
            vec![4.0, 1.0, 0.0],
            vec![1.0, 5.0, 2.0],
            vec![0.0, 2.0, 6.0],
        ]);
        let e0 = CsrMatrix::from_dense(&[vec![1.0], vec![0.0], vec![0.0]]);
        assert_eq!(coarse_matrix(&a, &e0).unwrap().to_dense(), vec![vec![4.0]]);
        let e02 = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(
            coarse_matrix(&a, &e02).unwrap().to_dense(),
            a.principal_submatrix(&[0, 2]).unwrap().to_dense()
        );
    }

    #[test]
    fn asymmetric_operator_rejected() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 1.0]]);
        assert!(matches!(
            coarse_matrix(&a, &CsrMatrix::identity(2)),
            Err(Error::CoarseAsymmetry(_))
        ));
    }

    #[test]
    fn zero_interface_values_extend_to_zero() {
        let a = CsrMatrix::from_dense(&[
            vec![4.0, 1.0, 0.0],
            vec![1.0, 5.0, 2.0],
            vec![0.0, 2.0, 6.0],
        ]);
        let split = DofSplit {
            gamma: vec![1],
            interior: vec![0, 2],
        };
        let phi = harmonic_extension(&a, &CsrMatrix::zeros(1, 2), &split).unwrap();
        assert_eq!(phi.nnz(), 0);
        let phi = harmonic_extension(&a, &CsrMatrix::from_dense(&[vec![1.0]]), &split).unwrap();
        // interior values -a_i1 / a_ii
        assert!((phi.get(0, 0) + 0.25).abs() < 1e-15);
        assert!((phi.get(2, 0) + 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(phi.get(1, 0), 1.0);
    }
}
