// Export the reduced system and coarse operators, then read them back.

use rgdsw_stokes::experiments::{export_system, ExperimentConfig};
use rgdsw_stokes::sparse::io::{read_matrix_market_file, read_vector_file};

pub fn run(dir: &std::path::Path) -> rgdsw_stokes::Result<()> {
    let config = ExperimentConfig {
        n: 3,
        subdomains: vec![8],
        out: Some(dir.to_path_buf()),
        ..ExperimentConfig::default()
    };
    let summary = export_system(&config)?;
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    let a = read_matrix_market_file(dir.join("A.mtx"))?;
    let b = read_vector_file(dir.join("b.txt"))?;
    let a0 = read_matrix_market_file(dir.join("A0.mtx"))?;
    println!(
        "A: {}x{} ({} nonzeros, asymmetry {:.1e}), |b| = {}, A0: {}x{}",
        a.nrows(),
        a.ncols(),
        a.nnz(),
        a.asymmetry(),
        b.len(),
        a0.nrows(),
        a0.ncols()
    );
    Ok(())
}

fn main() -> rgdsw_stokes::Result<()> {
    run(&std::env::temp_dir().join("rgdsw-export"))
}
