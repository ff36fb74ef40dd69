// Solve the body-force cube and write the velocity as a VTK file.

use std::path::{Path, PathBuf};

use rgdsw_stokes::experiments::{run_single, ExperimentConfig};

pub fn run(dir: &Path) -> rgdsw_stokes::Result<PathBuf> {
    let config = ExperimentConfig {
        n: 4,
        subdomains: vec![8],
        out: Some(dir.to_path_buf()),
        vtk: true,
        ..ExperimentConfig::default()
    };
    let result = run_single(&config)?;
    let peak = result.solution.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("{} iterations, max |u_i| = {peak:.3e}", result.report.iterations);
    let path = dir.join("solution.vtk");
    println!("open {} in ParaView", path.display());
    Ok(path)
}

fn main() -> rgdsw_stokes::Result<()> {
    run(&std::env::temp_dir().join("rgdsw-vtk")).map(|_| ())
}
