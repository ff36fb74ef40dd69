//! Preconditioned conjugate gradients with a relative-residual stopping rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{dot, norm2, CsrMatrix, Factorization};

/// How often the recurrence residual is replaced by the true residual `b - A x`.
pub const TRUE_RESIDUAL_INTERVAL: usize = 50;

/// A symmetric positive definite operator approximating `A^{-1}`.
pub trait Preconditioner {
    /// Writes `z = M^{-1} r`.
    fn apply(&self, r: &[f64], z: &mut [f64]) -> Result<()>;
}

impl<F> Preconditioner for F
where
    F: Fn(&[f64], &mut [f64]) -> Result<()>,
{
    fn apply(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        self(r, z)
    }
}

/// `M = I`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Preconditioner for Identity {
    fn apply(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        z.copy_from_slice(r);
        Ok(())
    }
}

/// Exact inverse through a sparse factorization.
impl Preconditioner for Factorization {
    fn apply(&self, r: &[f64], z: &mut [f64]) -> Result<()> {
        z.copy_from_slice(r);
        self.solve_in_place(z)
    }
}

/// Outcome of one linear solve.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// `||r_k|| / ||r_0||`, starting with 1.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
}

impl SolveReport {
    pub fn total_seconds(&self) -> f64 {
        self.setup_seconds + self.solve_seconds
    }

    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// Solves `A x = b` from `x0`, stopping when `||r_k|| <= tol ||r_0||` or after
/// `maxit` iterations. Non-convergence is reported through
/// [`SolveReport::converged`]; only a curvature breakdown is an error.
///
/// A candidate convergence detected by the recurrence is confirmed against the
/// true residual, which is also recomputed every [`TRUE_RESIDUAL_INTERVAL`]
/// iterations.
pub fn pcg<M: Preconditioner + ?Sized>(
    a: &CsrMatrix,
    b: &[f64],
    m: &M,
    tol: f64,
    maxit: usize,
    x0: &[f64],
) -> Result<(Vec<f64>, SolveReport)> {
    let n = a.nrows();
    for len in [b.len(), x0.len(), a.ncols()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let start = std::time::Instant::now();
    let mut x = x0.to_vec();
    let mut r = true_residual(a, b, &x)?;
    let r0 = norm2(&r);
    let mut report = SolveReport::default();
    if r0 == 0.0 {
        report.residual_history.push(0.0);
        report.converged = true;
        report.solve_seconds = start.elapsed().as_secs_f64();
        return Ok((x, report));
    }
    report.residual_history.push(1.0);

    let mut z = vec![0.0; n];
    m.apply(&r, &mut z)?;
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];

    for k in 1..=maxit {
        a.spmv_into(&p, &mut ap)?;
        let curvature = dot(&p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::Breakdown {
                iteration: k,
                curvature,
            });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        report.iterations = k;
        let mut rel = norm2(&r) / r0;
        let candidate = rel <= tol;
        if candidate || k % TRUE_RESIDUAL_INTERVAL == 0 {
            r = true_residual(a, b, &x)?;
            rel = norm2(&r) / r0;
            if rel <= tol {
                report.residual_history.push(rel);
                report.converged = true;
                break;
            }
        }
        report.residual_history.push(rel);
        m.apply(&r, &mut z)?;
        let rz_new = dot(&r, &z);
        if candidate {
            // drift: restart the search direction from the true residual
            p.copy_from_slice(&z);
        } else {
            let beta = rz_new / rz;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        rz = rz_new;
    }
    report.solve_seconds = start.elapsed().as_secs_f64();
    Ok((x, report))
}

fn true_residual(a: &CsrMatrix, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let mut r = a.spmv(x)?;
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    Ok(r)
}
