//! Vector-valued continuous Lagrange spaces (P1, P2) on tetrahedral meshes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{det3, sub, Mesh, TET_EDGES};

/// Polynomial order of the Lagrange space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    #[serde(rename = "1")]
    Linear,
    #[serde(rename = "2")]
    Quadratic,
}

impl Order {
    pub fn from_degree(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Order::Linear),
            2 => Ok(Order::Quadratic),
            _ => Err(Error::Config(format!("unsupported FE order {k}, expected 1 or 2"))),
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Order::Linear => 1,
            Order::Quadratic => 2,
        }
    }

    /// Scalar basis functions per tetrahedron.
    pub fn local_nodes(self) -> usize {
        match self {
            Order::Linear => 4,
            Order::Quadratic => 10,
        }
    }
}

pub const COMPONENTS: usize = 3;

/// Affine geometry of one tetrahedron.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub vertices: [[f64; 3]; 4],
    pub volume: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 3]; 4],
}

impl ElementGeometry {
    pub fn new(vertices: [[f64; 3]; 4], element: usize) -> Result<Self> {
        let e1 = sub(&vertices[1], &vertices[0]);
        let e2 = sub(&vertices[2], &vertices[0]);
        let e3 = sub(&vertices[3], &vertices[0]);
        let det = det3(&e1, &e2, &e3);
        let volume = det / 6.0;
        if !(volume.abs() > 0.0) {
            return Err(Error::DegenerateElement { element, volume });
        }
        // rows of J^{-1} (J has columns e1, e2, e3) are cross products / det
        let cross = |a: &[f64; 3], b: &[f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let g1 = cross(&e2, &e3).map(|v| v / det);
        let g2 = cross(&e3, &e1).map(|v| v / det);
        let g3 = cross(&e1, &e2).map(|v| v / det);
        let g0 = [
            -(g1[0] + g2[0] + g3[0]),
            -(g1[1] + g2[1] + g3[1]),
            -(g1[2] + g2[2] + g3[2]),
        ];
        Ok(Self {
            vertices,
            volume: volume.abs(),
            grad_lambda: [g0, g1, g2, g3],
        })
    }

    /// Physical point at barycentric coordinates `lambda`.
    pub fn point(&self, lambda: &[f64; 4]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for (l, v) in lambda.iter().zip(&self.vertices) {
            for d in 0..3 {
                x[d] += l * v[d];
            }
        }
        x
    }
}

/// Values of the scalar basis at barycentric point `lambda` (local node order).
pub fn shape_values(order: Order, lambda: &[f64; 4], out: &mut [f64]) {
    match order {
        Order::Linear => out[..4].copy_from_slice(lambda),
        Order::Quadratic => {
            for i in 0..4 {
                out[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
            }
            for (e, &[a, b]) in TET_EDGES.iter().enumerate() {
                out[4 + e] = 4.0 * lambda[a] * lambda[b];
            }
        }
    }
}

/// Gradients of the scalar basis at barycentric point `lambda`.
pub fn shape_gradients(order: Order, lambda: &[f64; 4], geo: &ElementGeometry, out: &mut [[f64; 3]]) {
    let g = &geo.grad_lambda;
    match order {
        Order::Linear => out[..4].copy_from_slice(g),
        Order::Quadratic => {
            for i in 0..4 {
                let s = 4.0 * lambda[i] - 1.0;
                out[i] = g[i].map(|v| s * v);
            }
            for (e, &[a, b]) in TET_EDGES.iter().enumerate() {
                for d in 0..3 {
                    out[4 + e][d] = 4.0 * (lambda[a] * g[b][d] + lambda[b] * g[a][d]);
                }
            }
        }
    }
}

/// Scalar Lagrange space replicated over three velocity components.
///
/// Scalar nodes are the mesh vertices followed (for P2) by one node per edge.
/// Vector dofs are component-blocked: dof `c * num_nodes + node`.
#[derive(Debug, Clone)]
pub struct FeSpace {
    mesh: Mesh,
    order: Order,
    num_nodes: usize,
    element_nodes: Vec<Vec<usize>>,
    node_coords: Vec<[f64; 3]>,
}

impl FeSpace {
    pub fn new(mesh: Mesh, order: Order) -> Self {
        let nv = mesh.num_vertices();
        let (num_nodes, element_nodes, node_coords) = match order {
            Order::Linear => (
                nv,
                mesh.tets.iter().map(|t| t.to_vec()).collect(),
                mesh.vertices.clone(),
            ),
            Order::Quadratic => {
                let elems = mesh
                    .tets
                    .iter()
                    .zip(&mesh.tet_edges)
                    .map(|(t, e)| {
                        let mut v = t.to_vec();
                        v.extend(e.iter().map(|&ei| nv + ei));
                        v
                    })
                    .collect();
                let mut coords = mesh.vertices.clone();
                coords.extend((0..mesh.num_edges()).map(|e| mesh.edge_midpoint(e)));
                (nv + mesh.num_edges(), elems, coords)
            }
        };
        Self {
            mesh,
            order,
            num_nodes,
            element_nodes,
            node_coords,
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Scalar node count.
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_dofs(&self) -> usize {
        COMPONENTS * self.num_nodes
    }

    pub fn num_elements(&self) -> usize {
        self.element_nodes.len()
    }

    pub fn element_nodes(&self, t: usize) -> &[usize] {
        &self.element_nodes[t]
    }

    pub fn node_coords(&self) -> &[[f64; 3]] {
        &self.node_coords
    }

    pub fn dof(&self, component: usize, node: usize) -> usize {
        component * self.num_nodes + node
    }

    /// Scalar node of a vector dof.
    pub fn node_of(&self, dof: usize) -> usize {
        dof % self.num_nodes
    }

    pub fn component_of(&self, dof: usize) -> usize {
        dof / self.num_nodes
    }

    /// Global vector dofs of element `t`, ordered `(component, local node)`.
    pub fn element_dofs(&self, t: usize) -> Vec<usize> {
        let nodes = &self.element_nodes[t];
        (0..COMPONENTS)
            .flat_map(|c| nodes.iter().map(move |&n| c * self.num_nodes + n))
            .collect()
    }

    pub fn geometry(&self, t: usize) -> Result<ElementGeometry> {
        ElementGeometry::new(self.mesh.tet_vertices(t), t)
    }

    /// Nodal interpolant of a vector field.
    pub fn interpolate(&self, f: impl Fn(&[f64; 3]) -> [f64; 3]) -> Vec<f64> {
        let mut u = vec![0.0; self.num_dofs()];
        for (n, x) in self.node_coords.iter().enumerate() {
            let v = f(x);
            for c in 0..COMPONENTS {
                u[c * self.num_nodes + n] = v[c];
            }
        }
        u
    }

    /// The constant translation field `e_component` (a null-space vector of the operator).
    pub fn translation(&self, component: usize) -> Vec<f64> {
        let mut u = vec![0.0; self.num_dofs()];
        u[component * self.num_nodes..(component + 1) * self.num_nodes].fill(1.0);
        u
    }

    /// Evaluates `u_h` on element `t` at barycentric point `lambda`.
    pub fn evaluate(&self, u: &[f64], t: usize, lambda: &[f64; 4]) -> [f64; 3] {
        let mut phi = [0.0; 10];
        shape_values(self.order, lambda, &mut phi);
        let mut out = [0.0; 3];
        for (c, oc) in out.iter_mut().enumerate() {
            for (a, &n) in self.element_nodes[t].iter().enumerate() {
                *oc += phi[a] * u[c * self.num_nodes + n];
            }
        }
        out
    }

    /// For each scalar node, the sorted list of elements containing it.
    pub fn node_elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_nodes];
        for (t, nodes) in self.element_nodes.iter().enumerate() {
            for &n in nodes {
                out[n].push(t);
            }
        }
        out
    }
}
