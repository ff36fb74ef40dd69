// Build the RGDSW coarse basis and check its defining properties.

use rgdsw_stokes::experiments::Problem;
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::interface::InterfaceStructure;
use rgdsw_stokes::partition::partition_elements;
use rgdsw_stokes::rgdsw::CoarseBasis;

pub fn run() -> rgdsw_stokes::Result<CoarseBasis> {
    let problem = Problem::build(ScenarioKind::CubeBodyForce, 6, 2, 1e-4)?;
    let sys = &problem.system;
    let partition = partition_elements(problem.space.mesh(), 27)?;
    let structure = InterfaceStructure::build(&problem.space, &partition, &sys.constraints)?;
    let basis = CoarseBasis::build(sys, &problem.space, &structure)?;
    println!(
        "{} coarse nodes, Phi is {}x{} with {} nonzeros",
        basis.num_coarse_nodes,
        basis.phi.nrows(),
        basis.phi.ncols(),
        basis.phi.nnz()
    );
    // summing the columns of one translation reproduces it on the interface
    for j in 0..3 {
        let select: Vec<f64> = (0..basis.dim()).map(|c| if c % 3 == j { 1.0 } else { 0.0 }).collect();
        let on_gamma = basis.phi_gamma.spmv(&select)?;
        let r_j = problem.space.translation(j);
        let dev = basis
            .split
            .gamma
            .iter()
            .zip(&on_gamma)
            .fold(0.0f64, |m, (&i, v)| m.max((v - r_j[sys.free[i]]).abs()));
        println!("translation {j}: max deviation on the interface {dev:.1e}");
    }
    println!(
        "harmonic residual {:.2e} (|A|max {:.2e}), A0 asymmetry {:.1e}",
        basis.harmonic_residual(&sys.matrix)?,
        sys.matrix.max_abs(),
        basis.a0.asymmetry()
    );
    Ok(basis)
}

fn main() -> rgdsw_stokes::Result<()> {
    run().map(|_| ())
}
