//! Problem data: body forces, boundary values, penalty parameter and reference fields.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::BoundaryMarker;

pub type VectorField = Arc<dyn Fn(&[f64; 3]) -> [f64; 3] + Send + Sync>;
pub type ScalarField = Arc<dyn Fn(&[f64; 3]) -> f64 + Send + Sync>;

/// Boundary values imposed on every face carrying `marker`.
#[derive(Clone)]
pub struct DirichletData {
    pub marker: String,
    pub value: VectorField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Unit cube, no-slip walls, `f = (0, x - 1/2, 0)`.
    CubeBodyForce,
    /// Unit cube with the stream-function solution below and `p = x(1 - x)`.
    CubeManufactured,
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube_body_force" => Ok(Self::CubeBodyForce),
            "cube_manufactured" => Ok(Self::CubeManufactured),
            other => Err(Error::Config(format!("unknown scenario '{other}'"))),
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::CubeBodyForce => "cube_body_force",
            Self::CubeManufactured => "cube_manufactured",
        })
    }
}

pub struct Scenario {
    pub kind: Option<ScenarioKind>,
    pub body_force: VectorField,
    pub boundary: Vec<BoundaryMarker>,
    pub dirichlet: Vec<DirichletData>,
    /// Penalty parameter, in (0, 1].
    pub epsilon: f64,
    pub u_ref: Option<VectorField>,
    pub p_ref: Option<ScalarField>,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario")
            .field("kind", &self.kind)
            .field("boundary", &self.boundary)
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

pub const WALL: &str = "wall";

pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "penalty parameter {epsilon} outside (0, 1]"
        )))
    }
}

fn zero_field() -> VectorField {
    Arc::new(|_| [0.0; 3])
}

impl Scenario {
    pub fn new(kind: ScenarioKind, epsilon: f64) -> Result<Self> {
        match kind {
            ScenarioKind::CubeBodyForce => Self::cube_body_force(epsilon),
            ScenarioKind::CubeManufactured => Self::cube_manufactured(epsilon),
        }
    }

    /// Homogeneous no-slip cube driven by `f = (0, x - 1/2, 0)`.
    pub fn cube_body_force(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            kind: Some(ScenarioKind::CubeBodyForce),
            body_force: Arc::new(|x| [0.0, x[0] - 0.5, 0.0]),
            boundary: vec![BoundaryMarker::new(WALL, |_| true)],
            dirichlet: vec![DirichletData {
                marker: WALL.into(),
                value: zero_field(),
            }],
            epsilon,
            u_ref: None,
            p_ref: None,
        })
    }

    /// Cube with known velocity and pressure; the body force is `-lap u + grad p`.
    pub fn cube_manufactured(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let sol = ManufacturedSolution::stream_function();
        Ok(Self {
            kind: Some(ScenarioKind::CubeManufactured),
            body_force: manufactured_rhs(&sol),
            boundary: vec![BoundaryMarker::new(WALL, |_| true)],
            dirichlet: vec![DirichletData {
                marker: WALL.into(),
                value: sol.velocity.clone(),
            }],
            epsilon,
            u_ref: Some(sol.velocity),
            p_ref: Some(sol.pressure),
        })
    }
}

/// Closed-form velocity/pressure pair with the derivatives needed for a body force.
#[derive(Clone)]
pub struct ManufacturedSolution {
    pub velocity: VectorField,
    pub velocity_laplacian: VectorField,
    pub pressure: ScalarField,
    pub pressure_gradient: VectorField,
}

/// `a(t) = t^2 (1 - t^2)^2` and its first three derivatives.
pub mod profile {
    pub fn a(t: f64) -> f64 {
        let s = 1.0 - t * t;
        t * t * s * s
    }

    pub fn da(t: f64) -> f64 {
        2.0 * t - 8.0 * t.powi(3) + 6.0 * t.powi(5)
    }

    pub fn d2a(t: f64) -> f64 {
        2.0 - 24.0 * t * t + 30.0 * t.powi(4)
    }

    pub fn d3a(t: f64) -> f64 {
        -48.0 * t + 120.0 * t.powi(3)
    }
}

impl ManufacturedSolution {
    /// `u = (a(x) a'(y), -a(y) a'(x), 0)`, `p = x (1 - x)`; divergence-free by construction.
    pub fn stream_function() -> Self {
        use profile::*;
        Self {
            velocity: Arc::new(|x| [a(x[0]) * da(x[1]), -a(x[1]) * da(x[0]), 0.0]),
            velocity_laplacian: Arc::new(|x| {
                [
                    d2a(x[0]) * da(x[1]) + a(x[0]) * d3a(x[1]),
                    -(d2a(x[1]) * da(x[0]) + a(x[1]) * d3a(x[0])),
                    0.0,
                ]
            }),
            pressure: Arc::new(|x| x[0] * (1.0 - x[0])),
            pressure_gradient: Arc::new(|x| [1.0 - 2.0 * x[0], 0.0, 0.0]),
        }
    }

    /// Analytic divergence of the stream-function velocity.
    pub fn stream_function_divergence(x: &[f64; 3]) -> f64 {
        use profile::*;
        da(x[0]) * da(x[1]) - da(x[1]) * da(x[0])
    }
}

/// `f = -lap u + grad p`.
pub fn manufactured_rhs(sol: &ManufacturedSolution) -> VectorField {
    let lap = sol.velocity_laplacian.clone();
    let grad = sol.pressure_gradient.clone();
    Arc::new(move |x| {
        let l = lap(x);
        let g = grad(x);
        [-l[0] + g[0], -l[1] + g[1], -l[2] + g[2]]
    })
}
