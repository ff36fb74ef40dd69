// Split a box mesh into subdomains and inspect the pieces.

use rgdsw_stokes::mesh::{build_box_mesh, BoxDomain};
use rgdsw_stokes::partition::{dual_graph, partition_elements};

pub fn run(n: usize, parts: usize) -> rgdsw_stokes::Result<Vec<usize>> {
    let mesh = build_box_mesh(n, n, n, BoxDomain::unit_cube())?;
    let partition = partition_elements(&mesh, parts)?;
    let sizes = partition.sizes();
    println!("{} tets into {parts} parts: sizes {sizes:?}", mesh.num_tets());
    println!("face connected: {}", partition.is_face_connected(&dual_graph(&mesh)));
    let mut buf = Vec::new();
    partition.write(&mut buf)?;
    println!("partition file: {} lines", buf.iter().filter(|&&b| b == b'\n').count());
    Ok(sizes)
}

fn main() -> rgdsw_stokes::Result<()> {
    run(4, 8).map(|_| ())
}
