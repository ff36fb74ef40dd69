//! Penalized Stokes flow on Kuhn-subdivided boxes, solved with PCG and
//! overlapping Schwarz preconditioners, optionally with an RGDSW coarse level.

pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod fem;
pub mod interface;
pub mod mesh;
pub mod partition;
pub mod pcg;
pub mod rgdsw;
pub mod schwarz;
pub mod sparse;
pub mod vtk;

pub use error::{Error, Result};
