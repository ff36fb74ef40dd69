// Penalty sweep on the manufactured cube: L2 error and iterations per epsilon.
//
// `cargo run --release --example penalty_sweep -- 8 16` runs the n=8, N=16 study.

use rgdsw_stokes::experiments::{run_penalty_sweep, ExperimentConfig, SweepRow};

pub fn run(n: usize, subdomains: usize) -> rgdsw_stokes::Result<Vec<SweepRow>> {
    let config = ExperimentConfig {
        n,
        subdomains: vec![subdomains],
        ..ExperimentConfig::penalty_sweep()
    };
    let rows = run_penalty_sweep(&config)?;
    println!("{:>8} {:>12} {:>6} {:>9} {:>9}", "epsilon", "l2_error", "its", "total_s", "setup_s");
    for r in &rows {
        println!(
            "{:>8.0e} {:>12.4e} {:>6} {:>9.3} {:>9.3}",
            r.epsilon, r.l2_error, r.iterations, r.total_s, r.setup_s
        );
    }
    Ok(rows)
}

fn main() -> rgdsw_stokes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(4);
    let parts = args.next().unwrap_or(8);
    run(n, parts).map(|_| ())
}
