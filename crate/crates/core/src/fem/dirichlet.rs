//! Dirichlet constraints by symmetric elimination, and the reduced free-dof system.

use super::assembly::{assemble_bilinear, assemble_load};
use super::scenario::Scenario;
use super::space::{FeSpace, Order, COMPONENTS};
use crate::error::{Error, Result};
use crate::mesh::BoundaryMarking;
use crate::sparse::CsrMatrix;

/// Constrained vector dofs (ascending) with their prescribed values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constraints {
    pub dofs: Vec<usize>,
    pub values: Vec<f64>,
}

impl Constraints {
    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    /// Mask over all dofs, true where constrained.
    pub fn mask(&self, ndof: usize) -> Vec<bool> {
        let mut m = vec![false; ndof];
        for &d in &self.dofs {
            m[d] = true;
        }
        m
    }

    /// Complement of the constrained set, ascending.
    pub fn free_dofs(&self, ndof: usize) -> Vec<usize> {
        let m = self.mask(ndof);
        (0..ndof).filter(|&d| !m[d]).collect()
    }
}

/// Scalar nodes lying on faces with marker `id` (vertices, plus edge nodes for P2).
pub fn marker_nodes(space: &FeSpace, marking: &BoundaryMarking, id: usize) -> Vec<usize> {
    let mesh = space.mesh();
    let mut nodes = marking.vertices(mesh, id);
    if space.order() == Order::Quadratic {
        let nv = mesh.num_vertices();
        nodes.extend(marking.edges(mesh, id).into_iter().map(|e| nv + e));
    }
    nodes
}

/// Collects constrained dofs from the scenario's Dirichlet data. All three
/// components of every node on a Dirichlet marker are constrained.
pub fn dirichlet_constraints(
    space: &FeSpace,
    marking: &BoundaryMarking,
    scenario: &Scenario,
) -> Result<Constraints> {
    let ndof = space.num_dofs();
    let mut value: Vec<Option<f64>> = vec![None; ndof];
    for bc in &scenario.dirichlet {
        let id = marking
            .marker_id(&bc.marker)
            .ok_or_else(|| Error::UnmarkedDirichlet(bc.marker.clone()))?;
        for node in marker_nodes(space, marking, id) {
            let g = (bc.value)(&space.node_coords()[node]);
            for (c, &gc) in g.iter().enumerate() {
                let dof = space.dof(c, node);
                match value[dof] {
                    Some(prev) if (prev - gc).abs() > 1e-12 * prev.abs().max(1.0) => {
                        return Err(Error::ConflictingDirichlet {
                            dof,
                            first: prev,
                            second: gc,
                        })
                    }
                    Some(_) => {}
                    None => value[dof] = Some(gc),
                }
            }
        }
    }
    let mut out = Constraints::default();
    for (d, v) in value.into_iter().enumerate() {
        if let Some(v) = v {
            out.dofs.push(d);
            out.values.push(v);
        }
    }
    Ok(out)
}

/// Symmetric elimination: lifts `b` by `-A[:, c] g_c`, zeroes constrained
/// rows and columns, puts 1 on their diagonal and `g_c` in `b`.
pub fn apply_dirichlet(a: &mut CsrMatrix, b: &mut [f64], constraints: &Constraints) -> Result<()> {
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut g = vec![0.0; n];
    let mut constrained = vec![false; n];
    for (&d, &v) in constraints.dofs.iter().zip(&constraints.values) {
        if d >= n {
            return Err(Error::IndexOutOfRange { index: d, dim: n });
        }
        g[d] = v;
        constrained[d] = true;
    }
    let lift = a.spmv(&g)?;
    for i in 0..n {
        if !constrained[i] {
            b[i] -= lift[i];
        }
    }
    let offsets = a.row_offsets().to_vec();
    let cols = a.col_indices().to_vec();
    let vals = a.values_mut();
    for i in 0..n {
        for p in offsets[i]..offsets[i + 1] {
            let j = cols[p];
            if constrained[i] || constrained[j] {
                vals[p] = if i == j { 1.0 } else { 0.0 };
            }
        }
    }
    for (&d, &v) in constraints.dofs.iter().zip(&constraints.values) {
        b[d] = v;
    }
    Ok(())
}

/// Assembled and constrained linear system over all dofs.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub constraints: Constraints,
}

/// Assembles the penalized operator and load for `scenario` and applies its
/// Dirichlet data.
pub fn assemble(space: &FeSpace, scenario: &Scenario) -> Result<AssembledSystem> {
    super::scenario::check_epsilon(scenario.epsilon)?;
    let mut matrix = assemble_bilinear(space, 1.0, 1.0 / scenario.epsilon)?;
    let mut rhs = assemble_load(space, &scenario.body_force)?;
    let marking = space.mesh().classify_boundary(&scenario.boundary);
    let constraints = dirichlet_constraints(space, &marking, scenario)?;
    apply_dirichlet(&mut matrix, &mut rhs, &constraints)?;
    Ok(AssembledSystem {
        matrix,
        rhs,
        constraints,
    })
}

/// The system restricted to free dofs, on which the preconditioners operate.
#[derive(Debug, Clone)]
pub struct FreeSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// `free[i]` is the global dof of free index `i`.
    pub free: Vec<usize>,
    pub constraints: Constraints,
    pub num_dofs: usize,
}

impl FreeSystem {
    pub fn from_assembled(sys: &AssembledSystem) -> Result<Self> {
        let n = sys.matrix.nrows();
        let free = sys.constraints.free_dofs(n);
        let matrix = sys.matrix.principal_submatrix(&free)?;
        let rhs = free.iter().map(|&d| sys.rhs[d]).collect();
        Ok(Self {
            matrix,
            rhs,
            free,
            constraints: sys.constraints.clone(),
            num_dofs: n,
        })
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    /// Full-length vector from free values and the prescribed boundary values.
    pub fn expand(&self, u_free: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; self.num_dofs];
        for (&d, &v) in self.free.iter().zip(u_free) {
            u[d] = v;
        }
        for (&d, &v) in self.constraints.dofs.iter().zip(&self.constraints.values) {
            u[d] = v;
        }
        u
    }

    /// Map from global dof to free index (`usize::MAX` for constrained dofs).
    pub fn free_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.num_dofs];
        for (i, &d) in self.free.iter().enumerate() {
            idx[d] = i;
        }
        idx
    }
}

/// True when all components of `node` are free.
pub fn node_is_free(space: &FeSpace, mask: &[bool], node: usize) -> bool {
    (0..COMPONENTS).all(|c| !mask[space.dof(c, node)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::scenario::{DirichletData, Scenario};
    use crate::mesh::{build_box_mesh, BoundaryMarker, BoxDomain};
    use crate::sparse::ldlt::factor_spd;
    use std::sync::Arc;

    fn cube(n: usize, order: Order) -> FeSpace {
        FeSpace::new(build_box_mesh(n, n, n, BoxDomain::unit_cube()).unwrap(), order)
    }

    #[test]
    fn homogeneous_elimination() {
        let s = cube(2, Order::Linear);
        let sc = Scenario::cube_body_force(1e-2).unwrap();
        let sys = assemble(&s, &sc).unwrap();
        assert_eq!(sys.constraints.len(), 3 * 26);
        for &d in &sys.constraints.dofs {
            assert_eq!(sys.rhs[d], 0.0);
            assert_eq!(sys.matrix.get(d, d), 1.0);
            let (cols, vals) = sys.matrix.row(d);
            for (&j, &v) in cols.iter().zip(vals) {
                if j != d {
                    assert_eq!(v, 0.0);
                }
            }
        }
        sys.matrix.check_symmetric().unwrap();
    }

    #[test]
    fn conflicting_values_rejected() {
        let s = cube(1, Order::Linear);
        let mut sc = Scenario::cube_body_force(1.0).unwrap();
        sc.boundary = vec![
            BoundaryMarker::new("left", |c| c[0] < 1e-12),
            BoundaryMarker::new("bottom", |c| c[1] < 1e-12),
        ];
        sc.dirichlet = vec![
            DirichletData {
                marker: "left".into(),
                value: Arc::new(|_| [1.0, 0.0, 0.0]),
            },
            DirichletData {
                marker: "bottom".into(),
                value: Arc::new(|_| [2.0, 0.0, 0.0]),
            },
        ];
        assert!(matches!(
            assemble(&s, &sc),
            Err(Error::ConflictingDirichlet { .. })
        ));
    }

    #[test]
    fn missing_marker_rejected() {
        let s = cube(1, Order::Linear);
        let mut sc = Scenario::cube_body_force(1.0).unwrap();
        sc.dirichlet[0].marker = "nowhere".into();
        assert!(matches!(assemble(&s, &sc), Err(Error::UnmarkedDirichlet(_))));
    }

    #[test]
    fn linear_patch_test() {
        // u = (y, 0, 0) is harmonic and divergence-free: f = 0 reproduces it exactly
        let s = cube(2, Order::Linear);
        let mut sc = Scenario::cube_body_force(1e-3).unwrap();
        sc.body_force = Arc::new(|_| [0.0; 3]);
        sc.dirichlet[0].value = Arc::new(|x| [x[1], 0.0, 0.0]);
        let sys = assemble(&s, &sc).unwrap();
        let fs = FreeSystem::from_assembled(&sys).unwrap();
        let f = factor_spd(&fs.matrix).unwrap();
        let u = fs.expand(&f.solve(&fs.rhs).unwrap());
        let exact = s.interpolate(|x| [x[1], 0.0, 0.0]);
        for (a, b) in u.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn constrained_solve_satisfies_free_equations() {
        let s = cube(2, Order::Quadratic);
        let sc = Scenario::cube_body_force(1e-2).unwrap();
        let raw = assemble_bilinear(&s, 1.0, 1e2).unwrap();
        let load = assemble_load(&s, &sc.body_force).unwrap();
        let sys = assemble(&s, &sc).unwrap();
        let x = factor_spd(&sys.matrix).unwrap().solve(&sys.rhs).unwrap();
        let r = raw.spmv(&x).unwrap();
        let mask = sys.constraints.mask(s.num_dofs());
        let scale = load.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for d in 0..s.num_dofs() {
            if !mask[d] {
                assert!((r[d] - load[d]).abs() <= 1e-10 * scale.max(1.0));
            }
        }
    }
}
