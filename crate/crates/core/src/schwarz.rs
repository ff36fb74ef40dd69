//! One- and two-level overlapping additive Schwarz preconditioners:
//! `M^{-1} = Phi A_0^{-1} Phi^T + sum_i R_i^T A_i^{-1} R_i`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::pcg::Preconditioner;
use crate::rgdsw::CoarseBasis;
use crate::sparse::ldlt::factor_spd;
use crate::sparse::{CsrMatrix, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PreconditionerKind {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "one-level")]
    OneLevel,
    #[serde(rename = "two-level-rgdsw")]
    TwoLevelRgdsw,
}

impl std::str::FromStr for PreconditionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "one-level" => Ok(Self::OneLevel),
            "two-level-rgdsw" | "two-level" => Ok(Self::TwoLevelRgdsw),
            other => Err(Error::Config(format!("unknown preconditioner '{other}'"))),
        }
    }
}

impl std::fmt::Display for PreconditionerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::OneLevel => "one-level",
            Self::TwoLevelRgdsw => "two-level-rgdsw",
        })
    }
}

#[derive(Debug, Clone)]
struct LocalSolve {
    dofs: Vec<usize>,
    factor: Factorization,
}

#[derive(Debug, Clone)]
struct CoarseSolve {
    phi: CsrMatrix,
    factor: Factorization,
}

#[derive(Debug, Clone)]
pub struct SchwarzPreconditioner {
    n: usize,
    locals: Vec<LocalSolve>,
    coarse: Option<CoarseSolve>,
    setup_seconds: f64,
}

impl SchwarzPreconditioner {
    /// Extracts and factors every `A_i = R_i A R_i^T`, and `A_0` when a coarse
    /// basis is given.
    pub fn setup(a: &CsrMatrix, decomposition: &Decomposition, coarse: Option<&CoarseBasis>) -> Result<Self> {
        let start = Instant::now();
        let n = a.nrows();
        if decomposition.num_free != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: decomposition.num_free,
            });
        }
        let locals = decomposition
            .overlapping
            .par_iter()
            .enumerate()
            .map(|(i, dofs)| {
                let ai = a.principal_submatrix(dofs).map_err(|e| e.in_subdomain(i))?;
                let factor = factor_spd(&ai).map_err(|e| e.in_subdomain(i))?;
                Ok(LocalSolve {
                    dofs: dofs.clone(),
                    factor,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let coarse = match coarse {
            Some(basis) if basis.dim() > 0 => {
                if basis.phi.nrows() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: basis.phi.nrows(),
                    });
                }
                Some(CoarseSolve {
                    phi: basis.phi.clone(),
                    factor: factor_spd(&basis.a0).map_err(|e| e.in_stage("coarse factorization"))?,
                })
            }
            _ => None,
        };
        Ok(Self {
            n,
            locals,
            coarse,
            setup_seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn kind(&self) -> PreconditionerKind {
        if self.coarse.is_some() {
            PreconditionerKind::TwoLevelRgdsw
        } else {
            PreconditionerKind::OneLevel
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_subdomains(&self) -> usize {
        self.locals.len()
    }

    pub fn coarse_dim(&self) -> usize {
        self.coarse.as_ref().map_or(0, |c| c.factor.dim())
    }

    /// Wall time spent factoring local and coarse problems.
    pub fn setup_seconds(&self) -> f64 {
        self.setup_seconds
    }

    /// Subdomain sizes `|Omega_i'|`.
    pub fn local_sizes(&self) -> Vec<usize> {
        self.locals.iter().map(|l| l.dofs.len()).collect()
    }

    pub fn apply_to(&self, r: &[f64]) -> Result<Vec<f64>> {
        let mut z = vec![0.0; self.n];
        self.apply(r, &mut z)?;
        Ok(z)
    }
}

impl Preconditioner for SchwarzPreconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        for len in [r.len(), z.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: len,
                });
            }
        }
        let local_solutions: Vec<Result<Vec<f64>>> = self
            .locals
            .par_iter()
            .map(|l| {
                let mut x: Vec<f64> = l.dofs.iter().map(|&i| r[i]).collect();
                l.factor.solve_in_place(&mut x)?;
                Ok(x)
            })
            .collect();
        let coarse_part = match &self.coarse {
            Some(c) => {
                let mut rc = c.phi.spmv_transpose(r)?;
                c.factor.solve_in_place(&mut rc)?;
                Some(c.phi.spmv(&rc)?)
            }
            None => None,
        };
        match coarse_part {
            Some(zc) => z.copy_from_slice(&zc),
            None => z.fill(0.0),
        }
        // fixed subdomain order
        for (l, x) in self.locals.iter().zip(local_solutions) {
            for (&i, v) in l.dofs.iter().zip(x?) {
                z[i] += v;
            }
        }
        Ok(())
    }
}
