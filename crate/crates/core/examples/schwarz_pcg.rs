// Solve the body-force cube with no preconditioner, one-level Schwarz and
// two-level RGDSW, and compare iteration counts.

use rgdsw_stokes::experiments::{solve, Problem, SolverSettings};
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::schwarz::PreconditionerKind;

pub fn run(n: usize, subdomains: usize) -> rgdsw_stokes::Result<Vec<(PreconditionerKind, usize)>> {
    let problem = Problem::build(ScenarioKind::CubeBodyForce, n, 2, 1e-4)?;
    let mut out = Vec::new();
    for precond in [
        PreconditionerKind::None,
        PreconditionerKind::OneLevel,
        PreconditionerKind::TwoLevelRgdsw,
    ] {
        let settings = SolverSettings {
            subdomains,
            overlap: 2,
            precond,
            tol: 1e-6,
            maxit: 5000,
            random_seed: None,
        };
        let r = solve(&problem, &settings)?;
        println!(
            "{precond:>16}: {:4} iterations, coarse dim {:3}, setup {:.2}s, total {:.2}s",
            r.report.iterations,
            r.coarse_dim,
            r.report.setup_seconds,
            r.report.total_seconds()
        );
        out.push((precond, r.report.iterations));
    }
    Ok(out)
}

fn main() -> rgdsw_stokes::Result<()> {
    run(6, 8).map(|_| ())
}
