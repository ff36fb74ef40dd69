//! Lagrange finite elements for the penalized Stokes operator.

pub mod assembly;
pub mod dirichlet;
pub mod quadrature;
pub mod scenario;
pub mod space;

pub use assembly::{assemble_bilinear, assemble_load, elementwise_avg_divergence, l2_error};
pub use dirichlet::{apply_dirichlet, assemble, AssembledSystem, Constraints, FreeSystem};
pub use scenario::{manufactured_rhs, ManufacturedSolution, Scenario, ScenarioKind};
pub use space::{FeSpace, Order};
