use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rgdsw_stokes::experiments::{self, ExperimentConfig};
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::schwarz::PreconditionerKind;

#[derive(Parser)]
#[command(version, about = "Penalized Stokes solver with overlapping Schwarz preconditioners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem.
    Solve(Flags),
    /// Solve the manufactured problem for each penalty parameter.
    SweepEps(Flags),
    /// Fixed-size subdomains on growing meshes, one- and two-level.
    WeakScaling(Flags),
    /// Write A, b, Phi and A0 for external inspection.
    ExportSystem(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML file with defaults; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<ScenarioKind>,
    /// Cells per direction (per subdomain for weak-scaling).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    /// Penalty parameter(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Subdomain count(s); for weak-scaling, subdomains per direction.
    #[arg(long, value_delimiter = ',')]
    subdomains: Option<Vec<usize>>,
    #[arg(long)]
    overlap: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    #[arg(long)]
    precond: Option<PreconditionerKind>,
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for a random initial guess (zero guess when omitted).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write solution.vtk (solve only).
    #[arg(long)]
    vtk: bool,
}

impl Flags {
    fn resolve(self, base: ExperimentConfig, weak: bool) -> rgdsw_stokes::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => base,
        };
        if let Some(v) = self.scenario {
            c.scenario = v;
        }
        if let Some(v) = self.n {
            if weak {
                c.subdomain_cells = v;
            } else {
                c.n = v;
            }
        }
        if let Some(v) = self.order {
            c.order = v;
        }
        if let Some(v) = self.eps {
            c.eps = v;
        }
        if let Some(v) = self.subdomains {
            if weak {
                c.grids = v;
            } else {
                c.subdomains = v;
            }
        }
        if let Some(v) = self.overlap {
            c.overlap = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        if let Some(v) = self.maxit {
            c.maxit = v;
        }
        if let Some(v) = self.precond {
            c.precond = v;
        }
        if let Some(v) = self.threads {
            c.threads = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
            c.random_initial_guess = true;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        c.vtk |= self.vtk;
        c.validate()?;
        Ok(c)
    }
}

fn init_threads(threads: usize) {
    if threads > 0 {
        // fails only if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn run(cli: Cli) -> rgdsw_stokes::Result<()> {
    match cli.command {
        Command::Solve(f) => {
            let c = f.resolve(ExperimentConfig::default(), false)?;
            init_threads(c.threads);
            let r = experiments::run_single(&c)?;
            println!(
                "dofs={} free={} subdomains={} coarse_dim={} iterations={} converged={} setup_s={:.3} total_s={:.3}",
                r.dofs,
                r.free_dofs,
                r.subdomains,
                r.coarse_dim,
                r.report.iterations,
                r.report.converged,
                r.report.setup_seconds,
                r.report.total_seconds()
            );
            if let Some(e) = r.l2_error {
                println!("l2_error={e:e}");
            }
        }
        Command::SweepEps(f) => {
            let c = f.resolve(ExperimentConfig::penalty_sweep(), false)?;
            init_threads(c.threads);
            println!("epsilon,l2_error,iterations,total_s,setup_s");
            for r in experiments::run_penalty_sweep(&c)? {
                println!("{:e},{:e},{},{:.3},{:.3}", r.epsilon, r.l2_error, r.iterations, r.total_s, r.setup_s);
            }
        }
        Command::WeakScaling(f) => {
            let c = f.resolve(ExperimentConfig::default(), true)?;
            init_threads(c.threads);
            println!("subdomains,n,precond,free_dofs,coarse_dim,iterations,converged,setup_s,total_s");
            for r in experiments::run_weak_scaling(&c)? {
                println!(
                    "{},{},{},{},{},{},{},{:.3},{:.3}",
                    r.subdomains, r.n, r.precond, r.free_dofs, r.coarse_dim, r.iterations, r.converged, r.setup_s, r.total_s
                );
            }
        }
        Command::ExportSystem(f) => {
            let c = f.resolve(ExperimentConfig::default(), false)?;
            init_threads(c.threads);
            let s = experiments::export_system(&c)?;
            println!("free_dofs={} nnz={} coarse_dim={}", s.free_dofs, s.matrix_nnz, s.coarse_dim);
            for p in s.files {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
