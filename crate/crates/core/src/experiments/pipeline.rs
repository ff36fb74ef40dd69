//! mesh -> space -> assembly -> partition -> decomposition -> coarse space -> setup -> PCG

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::fem::{assemble, l2_error, FeSpace, FreeSystem, Order, Scenario, ScenarioKind};
use crate::interface::InterfaceStructure;
use crate::mesh::{build_box_mesh, BoxDomain};
use crate::partition::{partition_elements, Partition};
use crate::pcg::{pcg, Identity, SolveReport};
use crate::rgdsw::CoarseBasis;
use crate::schwarz::{PreconditionerKind, SchwarzPreconditioner};

/// A discretized problem on the unit cube, reduced to free dofs.
pub struct Problem {
    pub space: FeSpace,
    pub scenario: Scenario,
    pub system: FreeSystem,
    pub assembly_seconds: f64,
}

impl Problem {
    pub fn build(kind: ScenarioKind, n: usize, order: usize, epsilon: f64) -> Result<Self> {
        let scenario = Scenario::new(kind, epsilon).map_err(|e| e.in_stage("scenario"))?;
        Self::with_scenario(scenario, n, order)
    }

    pub fn with_scenario(scenario: Scenario, n: usize, order: usize) -> Result<Self> {
        let start = Instant::now();
        let mesh = build_box_mesh(n, n, n, BoxDomain::unit_cube()).map_err(|e| e.in_stage("mesh"))?;
        let order = Order::from_degree(order).map_err(|e| e.in_stage("space"))?;
        let space = FeSpace::new(mesh, order);
        let assembled = assemble(&space, &scenario).map_err(|e| e.in_stage("assembly"))?;
        let system = FreeSystem::from_assembled(&assembled).map_err(|e| e.in_stage("assembly"))?;
        Ok(Self {
            space,
            scenario,
            system,
            assembly_seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// L2 error against the scenario's reference velocity, if it has one.
    pub fn l2_error(&self, u_full: &[f64]) -> Result<Option<f64>> {
        match &self.scenario.u_ref {
            Some(u_ref) => Ok(Some(l2_error(&self.space, u_full, u_ref.as_ref())?)),
            None => Ok(None),
        }
    }
}

/// Solver settings for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub subdomains: usize,
    pub overlap: usize,
    pub precond: PreconditionerKind,
    pub tol: f64,
    pub maxit: usize,
    /// `Some(seed)` draws a uniform random initial guess in [-1, 1).
    pub random_seed: Option<u64>,
}

/// Everything built before the Krylov iteration starts.
pub struct PreparedSolver {
    pub partition: Option<Partition>,
    pub decomposition: Option<Decomposition>,
    pub interface: Option<InterfaceStructure>,
    pub coarse: Option<CoarseBasis>,
    pub preconditioner: Option<SchwarzPreconditioner>,
    pub setup_seconds: f64,
}

impl PreparedSolver {
    pub fn coarse_dim(&self) -> usize {
        self.coarse.as_ref().map_or(0, CoarseBasis::dim)
    }

    pub fn coarse_nodes(&self) -> usize {
        self.coarse.as_ref().map_or(0, |c| c.num_coarse_nodes)
    }
}

/// Builds the decomposition, coarse space and factorizations. The elapsed time
/// is the setup time: local/coarse problem assembly plus factorization.
pub fn prepare(problem: &Problem, settings: &SolverSettings) -> Result<PreparedSolver> {
    let start = Instant::now();
    if settings.precond == PreconditionerKind::None {
        return Ok(PreparedSolver {
            partition: None,
            decomposition: None,
            interface: None,
            coarse: None,
            preconditioner: None,
            setup_seconds: 0.0,
        });
    }
    let partition = partition_elements(problem.space.mesh(), settings.subdomains)
        .map_err(|e| e.in_stage("partition"))?;
    let decomposition = Decomposition::build(&problem.space, &partition, &problem.system, settings.overlap);
    let (interface, coarse) = if settings.precond == PreconditionerKind::TwoLevelRgdsw {
        let interface = InterfaceStructure::build(&problem.space, &partition, &problem.system.constraints)
            .map_err(|e| e.in_stage("interface"))?;
        let coarse = CoarseBasis::build(&problem.system, &problem.space, &interface)
            .map_err(|e| e.in_stage("coarse space"))?;
        (Some(interface), Some(coarse))
    } else {
        (None, None)
    };
    let preconditioner = SchwarzPreconditioner::setup(&problem.system.matrix, &decomposition, coarse.as_ref())
        .map_err(|e| e.in_stage("setup"))?;
    Ok(PreparedSolver {
        partition: Some(partition),
        decomposition: Some(decomposition),
        interface,
        coarse,
        preconditioner: Some(preconditioner),
        setup_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Result of one full solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub report: SolveReport,
    pub dofs: usize,
    pub free_dofs: usize,
    pub subdomains: usize,
    pub coarse_dim: usize,
    pub coarse_nodes: usize,
    pub l2_error: Option<f64>,
    pub assembly_seconds: f64,
    #[serde(skip)]
    pub solution: Vec<f64>,
}

pub fn initial_guess(n: usize, seed: Option<u64>) -> Vec<f64> {
    match seed {
        None => vec![0.0; n],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        }
    }
}

pub fn solve(problem: &Problem, settings: &SolverSettings) -> Result<RunResult> {
    if !(settings.tol > 0.0 && settings.tol < 1.0) {
        return Err(Error::Config(format!("tol {} outside (0, 1)", settings.tol)));
    }
    let prepared = prepare(problem, settings)?;
    let sys = &problem.system;
    let x0 = initial_guess(sys.num_free(), settings.random_seed);
    let (x, mut report) = match &prepared.preconditioner {
        Some(m) => pcg(&sys.matrix, &sys.rhs, m, settings.tol, settings.maxit, &x0),
        None => pcg(&sys.matrix, &sys.rhs, &Identity, settings.tol, settings.maxit, &x0),
    }
    .map_err(|e| e.in_stage("pcg"))?;
    report.setup_seconds = prepared.setup_seconds;
    let solution = sys.expand(&x);
    let l2 = problem.l2_error(&solution).map_err(|e| e.in_stage("error norm"))?;
    Ok(RunResult {
        report,
        dofs: sys.num_dofs,
        free_dofs: sys.num_free(),
        subdomains: if settings.precond == PreconditionerKind::None {
            0
        } else {
            settings.subdomains
        },
        coarse_dim: prepared.coarse_dim(),
        coarse_nodes: prepared.coarse_nodes(),
        l2_error: l2,
        assembly_seconds: problem.assembly_seconds,
        solution,
    })
}
