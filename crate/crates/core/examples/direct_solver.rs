// Sparse LDL^T with reverse Cuthill-McKee ordering on an assembled matrix.

use rgdsw_stokes::experiments::Problem;
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::sparse::ldlt::factor_spd;
use rgdsw_stokes::sparse::ordering::{bandwidth, reverse_cuthill_mckee};
use rgdsw_stokes::sparse::norm2;

pub fn run(n: usize) -> rgdsw_stokes::Result<f64> {
    let problem = Problem::build(ScenarioKind::CubeBodyForce, n, 2, 1e-4)?;
    let a = &problem.system.matrix;
    let identity: Vec<usize> = (0..a.nrows()).collect();
    let rcm = reverse_cuthill_mckee(a);
    println!("half-bandwidth {} -> {} after RCM", bandwidth(a, &identity), bandwidth(a, &rcm));
    let f = factor_spd(a)?;
    println!("dim {}, nnz(A) {}, nnz(L) {}", f.dim(), a.nnz(), f.factor_nnz());
    let x = f.solve(&problem.system.rhs)?;
    let ax = a.spmv(&x)?;
    let r: Vec<f64> = ax.iter().zip(&problem.system.rhs).map(|(p, q)| p - q).collect();
    let rel = norm2(&r) / norm2(&problem.system.rhs);
    println!("relative residual {rel:.2e}");
    Ok(rel)
}

fn main() -> rgdsw_stokes::Result<()> {
    run(4).map(|_| ())
}
