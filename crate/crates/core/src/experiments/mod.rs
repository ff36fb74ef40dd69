//! Experiment drivers shared by the CLI and the examples.

pub mod config;
pub mod pipeline;

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::interface::InterfaceStructure;
use crate::partition::partition_elements;
use crate::rgdsw::CoarseBasis;
use crate::schwarz::PreconditionerKind;
use crate::sparse::io::{write_matrix_market, write_vector, MmSymmetry};

pub use config::ExperimentConfig;
pub use pipeline::{initial_guess, prepare, solve, PreparedSolver, Problem, RunResult, SolverSettings};

impl ExperimentConfig {
    pub fn settings(&self, subdomains: usize) -> SolverSettings {
        SolverSettings {
            subdomains,
            overlap: self.overlap,
            precond: self.precond,
            tol: self.tol,
            maxit: self.maxit,
            random_seed: self.random_initial_guess.then_some(self.seed),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a ExperimentConfig,
    results: T,
}

fn write_json<T: Serialize>(path: &Path, config: &ExperimentConfig, results: T) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, &Report { config, results })?;
    Ok(())
}

fn out_dir(config: &ExperimentConfig) -> Result<Option<PathBuf>> {
    match &config.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

/// One solve with the first `eps`/`subdomains` entries. Writes `solve.json`
/// and, if requested, `solution.vtk`.
pub fn run_single(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let problem = Problem::build(config.scenario, config.n, config.order, config.eps[0])?;
    let result = solve(&problem, &config.settings(config.subdomains[0]))?;
    if let Some(dir) = out_dir(config)? {
        write_json(&dir.join("solve.json"), config, &result)?;
        if config.vtk {
            let file = BufWriter::new(File::create(dir.join("solution.vtk"))?);
            crate::vtk::write_vtk(file, &problem.space, &[("velocity", &result.solution)])?;
        }
    }
    Ok(result)
}

/// One row of the penalty sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub l2_error: f64,
    pub iterations: usize,
    pub total_s: f64,
    pub setup_s: f64,
    #[serde(skip)]
    pub converged: bool,
}

/// Solves once per `eps` entry. Writes `sweep_eps.csv` and `sweep_eps.json`.
/// Rows carry `NaN` for the error when the scenario has no reference solution.
pub fn run_penalty_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.eps.len());
    for &eps in &config.eps {
        let problem = Problem::build(config.scenario, config.n, config.order, eps)?;
        let r = solve(&problem, &config.settings(config.subdomains[0]))?;
        rows.push(SweepRow {
            epsilon: eps,
            l2_error: r.l2_error.unwrap_or(f64::NAN),
            iterations: r.report.iterations,
            total_s: r.report.total_seconds(),
            setup_s: r.report.setup_seconds,
            converged: r.report.converged,
        });
    }
    if let Some(dir) = out_dir(config)? {
        let mut w = csv::Writer::from_path(dir.join("sweep_eps.csv"))?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        write_json(&dir.join("sweep_eps.json"), config, &rows)?;
    }
    Ok(rows)
}

/// One weak-scaling run for a single preconditioner.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub subdomains: usize,
    pub n: usize,
    pub precond: PreconditionerKind,
    pub free_dofs: usize,
    pub coarse_dim: usize,
    pub iterations: usize,
    pub converged: bool,
    pub setup_s: f64,
    pub total_s: f64,
}

/// For each grid `g` the mesh has `g * subdomain_cells` cells per direction and
/// `g^3` subdomains, so the subdomain size stays fixed. Both one- and two-level
/// preconditioners run on every mesh. Writes `weak_scaling.csv` and `.json`.
pub fn run_weak_scaling(config: &ExperimentConfig) -> Result<Vec<ScalingRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &g in &config.grids {
        let n = g * config.subdomain_cells;
        let parts = g * g * g;
        let problem = Problem::build(config.scenario, n, config.order, config.eps[0])?;
        for precond in [PreconditionerKind::OneLevel, PreconditionerKind::TwoLevelRgdsw] {
            let settings = SolverSettings {
                precond,
                ..config.settings(parts)
            };
            let r = solve(&problem, &settings)?;
            rows.push(ScalingRow {
                subdomains: parts,
                n,
                precond,
                free_dofs: r.free_dofs,
                coarse_dim: r.coarse_dim,
                iterations: r.report.iterations,
                converged: r.report.converged,
                setup_s: r.report.setup_seconds,
                total_s: r.report.total_seconds(),
            });
        }
    }
    if let Some(dir) = out_dir(config)? {
        let mut w = csv::Writer::from_path(dir.join("weak_scaling.csv"))?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        write_json(&dir.join("weak_scaling.json"), config, &rows)?;
    }
    Ok(rows)
}

/// Files written by [`export_system`].
#[derive(Debug, Clone, Serialize)]
pub struct ExportSummary {
    pub free_dofs: usize,
    pub matrix_nnz: usize,
    pub coarse_dim: usize,
    pub files: Vec<PathBuf>,
}

/// Writes the reduced system (`A.mtx`, `b.txt`) and, for more than one
/// subdomain, the coarse basis (`Phi.mtx`, `A0.mtx`) plus `interface.json`.
pub fn export_system(config: &ExperimentConfig) -> Result<ExportSummary> {
    config.validate()?;
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let problem = Problem::build(config.scenario, config.n, config.order, config.eps[0])?;
    let sys = &problem.system;
    let mut files = Vec::new();

    let path = dir.join("A.mtx");
    write_matrix_market(BufWriter::new(File::create(&path)?), &sys.matrix, MmSymmetry::Symmetric)?;
    files.push(path);
    let path = dir.join("b.txt");
    write_vector(BufWriter::new(File::create(&path)?), &sys.rhs)?;
    files.push(path);

    let mut coarse_dim = 0;
    if config.subdomains[0] > 1 {
        let partition = partition_elements(problem.space.mesh(), config.subdomains[0])?;
        let structure = InterfaceStructure::build(&problem.space, &partition, &sys.constraints)?;
        let basis = CoarseBasis::build(sys, &problem.space, &structure)?;
        coarse_dim = basis.dim();
        let path = dir.join("Phi.mtx");
        write_matrix_market(BufWriter::new(File::create(&path)?), &basis.phi, MmSymmetry::General)?;
        files.push(path);
        let path = dir.join("A0.mtx");
        write_matrix_market(BufWriter::new(File::create(&path)?), &basis.a0, MmSymmetry::Symmetric)?;
        files.push(path);
        let path = dir.join("interface.json");
        serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), &structure.summary())?;
        files.push(path);
    }
    Ok(ExportSummary {
        free_dofs: sys.num_free(),
        matrix_nnz: sys.matrix.nnz(),
        coarse_dim,
        files,
    })
}
