// Nodal equivalence classes and coarse nodes of a 3x3x3 decomposition.

use rgdsw_stokes::experiments::Problem;
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::interface::{ComponentKind, InterfaceStructure};
use rgdsw_stokes::partition::partition_elements;

pub fn run() -> rgdsw_stokes::Result<InterfaceStructure> {
    let problem = Problem::build(ScenarioKind::CubeBodyForce, 6, 1, 1.0)?;
    let partition = partition_elements(problem.space.mesh(), 27)?;
    let s = InterfaceStructure::build(&problem.space, &partition, &problem.system.constraints)?;
    let count = |k| s.kinds.iter().filter(|&&x| x == k).count();
    println!(
        "{} interface nodes in {} necs ({} faces, {} edges, {} vertices)",
        s.gamma().len(),
        s.necs.len(),
        count(ComponentKind::Face),
        count(ComponentKind::Edge),
        count(ComponentKind::Vertex)
    );
    for &k in &s.coarse.coarse {
        println!("coarse node: nec {k} shared by {:?}", s.necs[k].subdomains);
    }
    println!("{}", serde_json::to_string(&s.summary().necs[0])?);
    Ok(s)
}

fn main() -> rgdsw_stokes::Result<()> {
    run().map(|_| ())
}
