//! Small dense kernels: Cholesky for tiny coarse problems and reference checks.

use crate::error::{Error, Result};

/// Row-major dense Cholesky factor `A = L L^T`.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    pub fn factor(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a[i][i].abs()));
        let tol = super::ldlt::PIVOT_TOLERANCE * max_diag;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            if a[j].len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a[j].len(),
                });
            }
            let mut djj = a[j][j];
            for k in 0..j {
                djj -= l[j * n + k] * l[j * n + k];
            }
            if !(djj > tol) {
                return Err(Error::NotPositiveDefinite {
                    index: j,
                    pivot: djj,
                });
            }
            let ljj = djj.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = a[i][j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        Ok(y)
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return Err(Error::NotPositiveDefinite {
                index: col,
                pivot: 0.0,
            });
        }
        m.swap(col, piv);
        for i in col + 1..n {
            let f = m[i][col] / m[col][col];
            if f != 0.0 {
                for j in col..=n {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Ok(x)
}

/// Dense `A B`.
pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![0.0; m];
            for (k, &aik) in row.iter().enumerate() {
                if aik != 0.0 {
                    for (o, &bkj) in out.iter_mut().zip(&b[k]) {
                        *o += aik * bkj;
                    }
                }
            }
            out
        })
        .collect()
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}
