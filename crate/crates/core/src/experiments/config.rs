use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::scenario::{check_epsilon, ScenarioKind};
use crate::schwarz::PreconditionerKind;

/// Every knob of an experiment. Loaded from TOML; CLI flags override fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    /// Cells per direction of the global mesh (`solve`, `sweep-eps`, `export-system`).
    pub n: usize,
    /// Lagrange order, 1 or 2.
    pub order: usize,
    /// Penalty parameters; `solve` uses the first entry.
    pub eps: Vec<f64>,
    /// Subdomain counts; `solve` uses the first entry.
    pub subdomains: Vec<usize>,
    /// Cells per direction inside one subdomain (`weak-scaling`).
    pub subdomain_cells: usize,
    /// Subdomains per direction for each weak-scaling run.
    pub grids: Vec<usize>,
    pub overlap: usize,
    pub tol: f64,
    pub maxit: usize,
    pub precond: PreconditionerKind,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    /// Seeds the initial guess when `random_initial_guess` is set.
    pub seed: u64,
    pub random_initial_guess: bool,
    pub out: Option<PathBuf>,
    /// Also write the velocity field as VTK (`solve` only).
    pub vtk: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::CubeBodyForce,
            n: 8,
            order: 2,
            eps: vec![1e-4],
            subdomains: vec![16],
            subdomain_cells: 4,
            grids: vec![2, 3, 4],
            overlap: 2,
            tol: 1e-6,
            maxit: 2000,
            precond: PreconditionerKind::TwoLevelRgdsw,
            threads: 0,
            seed: 0,
            random_initial_guess: false,
            out: None,
            vtk: false,
        }
    }
}

impl ExperimentConfig {
    /// The penalty sweep setup: manufactured cube, `eps` from 1e-1 to 1e-4.
    pub fn penalty_sweep() -> Self {
        Self {
            scenario: ScenarioKind::CubeManufactured,
            eps: vec![1e-1, 1e-2, 1e-3, 1e-4],
            ..Self::default()
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is TOML-serializable")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol {} outside (0, 1)", self.tol)));
        }
        if !(1..=2).contains(&self.order) {
            return Err(Error::Config(format!("order {} not in {{1, 2}}", self.order)));
        }
        if self.n == 0 || self.subdomain_cells == 0 {
            return Err(Error::Config("mesh sizes must be positive".into()));
        }
        if self.eps.is_empty() || self.subdomains.is_empty() {
            return Err(Error::Config("eps and subdomains need at least one entry".into()));
        }
        for &e in &self.eps {
            check_epsilon(e)?;
        }
        if self.subdomains.contains(&0) || self.grids.contains(&0) {
            return Err(Error::Config("subdomain counts must be positive".into()));
        }
        Ok(())
    }
}
