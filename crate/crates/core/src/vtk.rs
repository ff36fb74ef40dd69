//! Legacy ASCII VTK output of nodal vector fields.
//!
//! P1 spaces write linear tetrahedra (cell type 10); P2 spaces write quadratic
//! tetrahedra (cell type 24) so ParaView sees every node.

use std::io::Write;

use crate::error::{Error, Result};
use crate::fem::space::COMPONENTS;
use crate::fem::{FeSpace, Order};
use crate::mesh::TET_EDGES;

const VTK_TETRA: u8 = 10;
const VTK_QUADRATIC_TETRA: u8 = 24;
/// Edge order VTK expects for the mid-edge nodes of a quadratic tet.
const VTK_EDGES: [[usize; 2]; 6] = [[0, 1], [1, 2], [0, 2], [0, 3], [1, 3], [2, 3]];

/// Local node indices of an element, permuted into VTK order.
fn vtk_local_order(order: Order) -> Vec<usize> {
    match order {
        Order::Linear => vec![0, 1, 2, 3],
        Order::Quadratic => {
            let mut v = vec![0, 1, 2, 3];
            for e in VTK_EDGES {
                v.push(4 + TET_EDGES.iter().position(|&t| t == e).expect("every VTK edge is a tet edge"));
            }
            v
        }
    }
}

/// Writes the mesh and each `(name, values)` field, where `values` is a full
/// component-blocked dof vector.
pub fn write_vtk<W: Write>(mut w: W, space: &FeSpace, fields: &[(&str, &[f64])]) -> Result<()> {
    for (_, values) in fields {
        if values.len() != space.num_dofs() {
            return Err(Error::DimensionMismatch {
                expected: space.num_dofs(),
                got: values.len(),
            });
        }
    }
    let nn = space.num_nodes();
    let ne = space.num_elements();
    let local = vtk_local_order(space.order());
    let cell_type = match space.order() {
        Order::Linear => VTK_TETRA,
        Order::Quadratic => VTK_QUADRATIC_TETRA,
    };

    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "rgdsw-stokes velocity")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {nn} double")?;
    for x in space.node_coords() {
        writeln!(w, "{:e} {:e} {:e}", x[0], x[1], x[2])?;
    }
    writeln!(w, "CELLS {ne} {}", ne * (local.len() + 1))?;
    for t in 0..ne {
        let nodes = space.element_nodes(t);
        write!(w, "{}", local.len())?;
        for &l in &local {
            write!(w, " {}", nodes[l])?;
        }
        writeln!(w)?;
    }
    writeln!(w, "CELL_TYPES {ne}")?;
    for _ in 0..ne {
        writeln!(w, "{cell_type}")?;
    }
    if !fields.is_empty() {
        writeln!(w, "POINT_DATA {nn}")?;
        for (name, values) in fields {
            writeln!(w, "VECTORS {name} double")?;
            for node in 0..nn {
                let v: Vec<f64> = (0..COMPONENTS).map(|c| values[space.dof(c, node)]).collect();
                writeln!(w, "{:e} {:e} {:e}", v[0], v[1], v[2])?;
            }
        }
    }
    Ok(())
}
