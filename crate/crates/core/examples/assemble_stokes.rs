// Assemble the penalized Stokes system for the manufactured cube, solve it
// directly and compare with the exact velocity.

use rgdsw_stokes::experiments::Problem;
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::sparse::ldlt::factor_spd;

pub fn run(n: usize) -> rgdsw_stokes::Result<f64> {
    let problem = Problem::build(ScenarioKind::CubeManufactured, n, 2, 1e-4)?;
    let sys = &problem.system;
    println!(
        "n={n}: {} elements, {} dofs, {} free, nnz(A)={}",
        problem.space.num_elements(),
        sys.num_dofs,
        sys.num_free(),
        sys.matrix.nnz()
    );
    let u = factor_spd(&sys.matrix)?.solve(&sys.rhs)?;
    let err = problem.l2_error(&sys.expand(&u))?.expect("manufactured scenario has u_ref");
    println!("L2 error {err:.4e}");
    Ok(err)
}

fn main() -> rgdsw_stokes::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    run(n).map(|_| ())
}
