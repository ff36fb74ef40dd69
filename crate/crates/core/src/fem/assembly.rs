//! Assembly of the penalized vector Laplacian
//! `a(u, v) = (grad u, grad v) + eps^{-1} (avg div u, avg div v)`,
//! where the divergence is averaged over each element.

use rayon::prelude::*;

use super::quadrature::TetRule;
use super::scenario::VectorField;
use super::space::{shape_gradients, shape_values, ElementGeometry, FeSpace, Order, COMPONENTS};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Elements per parallel batch; batches are scattered in element order.
const BATCH: usize = 512;

/// Quadrature degree of the stiffness and divergence integrals.
pub const STIFFNESS_DEGREE: usize = 4;
/// Quadrature degree for load vectors and error norms.
pub const ERROR_DEGREE: usize = 6;

/// Local matrices of one element.
#[derive(Debug, Clone)]
pub struct ElementMatrices {
    /// Scalar stiffness `int grad phi_a . grad phi_b`, row-major `nloc x nloc`.
    pub stiffness: Vec<f64>,
    /// `int d(phi_a)/dx_c`, indexed `c * nloc + a`.
    pub divergence: Vec<f64>,
    pub volume: f64,
}

pub fn element_matrices(order: Order, geo: &ElementGeometry, rule: &TetRule) -> ElementMatrices {
    let nloc = order.local_nodes();
    let mut stiffness = vec![0.0; nloc * nloc];
    let mut divergence = vec![0.0; COMPONENTS * nloc];
    let mut grads = [[0.0; 3]; 10];
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        shape_gradients(order, p, geo, &mut grads);
        let wv = w * geo.volume;
        for a in 0..nloc {
            for c in 0..COMPONENTS {
                divergence[c * nloc + a] += wv * grads[a][c];
            }
            for b in 0..nloc {
                let g = grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1] + grads[a][2] * grads[b][2];
                stiffness[a * nloc + b] += wv * g;
            }
        }
    }
    // symmetrize exactly so the assembled matrix has identical triangles
    for a in 0..nloc {
        for b in 0..a {
            let s = 0.5 * (stiffness[a * nloc + b] + stiffness[b * nloc + a]);
            stiffness[a * nloc + b] = s;
            stiffness[b * nloc + a] = s;
        }
    }
    ElementMatrices {
        stiffness,
        divergence,
        volume: geo.volume,
    }
}

/// `(1/|T|) int_T div u_h` for local coefficients ordered `(component, local node)`.
pub fn elementwise_avg_divergence(space: &FeSpace, element: usize, local: &[f64]) -> Result<f64> {
    let nloc = space.order().local_nodes();
    if local.len() != COMPONENTS * nloc {
        return Err(Error::DimensionMismatch {
            expected: COMPONENTS * nloc,
            got: local.len(),
        });
    }
    let geo = space.geometry(element)?;
    // div u_h has degree k - 1, integrated exactly by the degree-1 rule
    let rule = TetRule::exact_for(space.order().degree() - 1);
    let em = element_matrices(space.order(), &geo, &rule);
    let integral: f64 = em.divergence.iter().zip(local).map(|(d, u)| d * u).sum();
    Ok(integral / geo.volume)
}

/// Local coefficients of a global vector on element `t`.
pub fn gather(space: &FeSpace, t: usize, u: &[f64]) -> Vec<f64> {
    space.element_dofs(t).into_iter().map(|d| u[d]).collect()
}

/// Structural pattern of the vector operator: all component pairs of all node
/// pairs sharing an element. Values are zero.
pub fn sparsity_pattern(space: &FeSpace) -> CsrMatrix {
    let nn = space.num_nodes();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for t in 0..space.num_elements() {
        let nodes = space.element_nodes(t);
        for &a in nodes {
            nbrs[a].extend_from_slice(nodes);
        }
    }
    for list in &mut nbrs {
        list.sort_unstable();
        list.dedup();
    }
    let ndof = space.num_dofs();
    let mut row_offsets = Vec::with_capacity(ndof + 1);
    row_offsets.push(0);
    let mut col_indices = Vec::new();
    for _c in 0..COMPONENTS {
        for list in &nbrs {
            for c2 in 0..COMPONENTS {
                col_indices.extend(list.iter().map(|&j| c2 * nn + j));
            }
            row_offsets.push(col_indices.len());
        }
    }
    let nnz = col_indices.len();
    CsrMatrix::new(ndof, ndof, row_offsets, col_indices, vec![0.0; nnz])
        .expect("pattern is sorted by construction")
}

/// Assembles `grad_weight * (grad u, grad v) + penalty_weight * (avg div u, avg div v)`
/// without boundary conditions.
pub fn assemble_bilinear(space: &FeSpace, grad_weight: f64, penalty_weight: f64) -> Result<CsrMatrix> {
    let order = space.order();
    let nloc = order.local_nodes();
    let nl = COMPONENTS * nloc;
    let rule = TetRule::exact_for(STIFFNESS_DEGREE);
    let mut a = sparsity_pattern(space);
    let mut positions = vec![0usize; nl * nl];
    for start in (0..space.num_elements()).step_by(BATCH) {
        let end = (start + BATCH).min(space.num_elements());
        let locals: Vec<Result<Vec<f64>>> = (start..end)
            .into_par_iter()
            .map(|t| {
                let geo = space.geometry(t)?;
                let em = element_matrices(order, &geo, &rule);
                let mut ke = vec![0.0; nl * nl];
                let pscale = penalty_weight / em.volume;
                for i in 0..nl {
                    let (ci, ai) = (i / nloc, i % nloc);
                    for j in 0..nl {
                        let (cj, aj) = (j / nloc, j % nloc);
                        let mut v = pscale * em.divergence[i] * em.divergence[j];
                        if ci == cj {
                            v += grad_weight * em.stiffness[ai * nloc + aj];
                        }
                        ke[i * nl + j] = v;
                    }
                }
                // penalty outer product is symmetric only up to rounding order
                for i in 0..nl {
                    for j in 0..i {
                        let s = 0.5 * (ke[i * nl + j] + ke[j * nl + i]);
                        ke[i * nl + j] = s;
                        ke[j * nl + i] = s;
                    }
                }
                Ok(ke)
            })
            .collect();
        for (t, ke) in (start..end).zip(locals) {
            let ke = ke?;
            let dofs = space.element_dofs(t);
            for (i, &gi) in dofs.iter().enumerate() {
                for (j, &gj) in dofs.iter().enumerate() {
                    positions[i * nl + j] = a.position(gi, gj).expect("pattern covers element");
                }
            }
            let vals = a.values_mut();
            for (k, &p) in positions.iter().enumerate() {
                vals[p] += ke[k];
            }
        }
    }
    Ok(a)
}

/// `b_i = int f . phi_i`.
pub fn assemble_load(space: &FeSpace, f: &VectorField) -> Result<Vec<f64>> {
    let order = space.order();
    let nloc = order.local_nodes();
    let rule = TetRule::exact_for(ERROR_DEGREE);
    let mut b = vec![0.0; space.num_dofs()];
    let locals: Vec<Result<Vec<f64>>> = (0..space.num_elements())
        .into_par_iter()
        .map(|t| {
            let geo = space.geometry(t)?;
            let mut be = vec![0.0; COMPONENTS * nloc];
            let mut phi = [0.0; 10];
            for (p, &w) in rule.points.iter().zip(&rule.weights) {
                shape_values(order, p, &mut phi);
                let fx = f(&geo.point(p));
                for c in 0..COMPONENTS {
                    for a in 0..nloc {
                        be[c * nloc + a] += w * geo.volume * fx[c] * phi[a];
                    }
                }
            }
            Ok(be)
        })
        .collect();
    for (t, be) in locals.into_iter().enumerate() {
        let be = be?;
        for (d, v) in space.element_dofs(t).into_iter().zip(be) {
            b[d] += v;
        }
    }
    Ok(b)
}

/// `(int_Omega |u_ref - u_h|^2)^{1/2}` with a degree-7 rule on each element.
pub fn l2_error(space: &FeSpace, u_h: &[f64], u_ref: &(dyn Fn(&[f64; 3]) -> [f64; 3] + Sync)) -> Result<f64> {
    if u_h.len() != space.num_dofs() {
        return Err(Error::DimensionMismatch {
            expected: space.num_dofs(),
            got: u_h.len(),
        });
    }
    let rule = TetRule::exact_for(ERROR_DEGREE);
    let parts: Vec<Result<f64>> = (0..space.num_elements())
        .into_par_iter()
        .map(|t| {
            let geo = space.geometry(t)?;
            let mut acc = 0.0;
            for (p, &w) in rule.points.iter().zip(&rule.weights) {
                let uh = space.evaluate(u_h, t, p);
                let ur = u_ref(&geo.point(p));
                let e2: f64 = (0..3).map(|d| (ur[d] - uh[d]).powi(2)).sum();
                acc += w * e2;
            }
            Ok(acc * geo.volume)
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total.sqrt())
}
