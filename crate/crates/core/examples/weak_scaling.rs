// Weak scaling with fixed-size subdomains: one-level vs two-level iterations.
//
// `cargo run --release --example weak_scaling -- 4 2 3 4` uses 4^3-cell
// subdomains on 2x2x2, 3x3x3 and 4x4x4 grids.

use rgdsw_stokes::experiments::{run_weak_scaling, ExperimentConfig, ScalingRow};

pub fn run(subdomain_cells: usize, grids: &[usize]) -> rgdsw_stokes::Result<Vec<ScalingRow>> {
    let config = ExperimentConfig {
        subdomain_cells,
        grids: grids.to_vec(),
        ..ExperimentConfig::default()
    };
    let rows = run_weak_scaling(&config)?;
    for r in &rows {
        println!(
            "N={:3} n={:3} {:>16}: {:4} iterations, {:6} free dofs, coarse dim {:4}, total {:.2}s",
            r.subdomains, r.n, r.precond, r.iterations, r.free_dofs, r.coarse_dim, r.total_s
        );
    }
    Ok(rows)
}

fn main() -> rgdsw_stokes::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer argument")).collect();
    match args.split_first() {
        Some((&cells, grids)) if !grids.is_empty() => run(cells, grids),
        _ => run(2, &[1, 2]),
    }
    .map(|_| ())
}
