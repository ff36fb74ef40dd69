//! Sparse LDL^T factorization for symmetric positive definite matrices.
//!
//! Up-looking row-by-row elimination driven by the elimination tree, applied
//! after a reverse Cuthill-McKee permutation. No pivoting is performed: a pivot
//! at or below `1e-14 * max|a_ii|` aborts with [`Error::NotPositiveDefinite`].

use super::ordering::{invert, reverse_cuthill_mckee};
use super::CsrMatrix;
use crate::error::{Error, Result};

/// Relative pivot threshold (scaled by the largest diagonal magnitude).
pub const PIVOT_TOLERANCE: f64 = 1e-14;

const NONE: usize = usize::MAX;

/// `P A P^T = L D L^T` with unit lower-triangular `L` stored by columns.
#[derive(Debug, Clone)]
pub struct Factorization {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    l_offsets: Vec<usize>,
    l_rows: Vec<usize>,
    l_values: Vec<f64>,
    d: Vec<f64>,
}

impl Factorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.d
    }

    /// Off-diagonal nonzeros in `L`.
    pub fn factor_nnz(&self) -> usize {
        self.l_values.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    /// Overwrites `x` (holding the right-hand side) with the solution.
    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut work: Vec<f64> = self.perm.iter().map(|&p| x[p]).collect();
        self.solve_permuted(&mut work);
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = work[new];
        }
        Ok(())
    }

    fn solve_permuted(&self, y: &mut [f64]) {
        for j in 0..self.n {
            let yj = y[j];
            if yj != 0.0 {
                for p in self.l_offsets[j]..self.l_offsets[j + 1] {
                    y[self.l_rows[p]] -= self.l_values[p] * yj;
                }
            }
        }
        for (yj, dj) in y.iter_mut().zip(&self.d) {
            *yj /= dj;
        }
        for j in (0..self.n).rev() {
            let mut acc = y[j];
            for p in self.l_offsets[j]..self.l_offsets[j + 1] {
                acc -= self.l_values[p] * y[self.l_rows[p]];
            }
            y[j] = acc;
        }
    }
}

/// Factors a symmetric positive definite matrix (both triangles stored).
pub fn factor_spd(a: &CsrMatrix) -> Result<Factorization> {
    let perm = reverse_cuthill_mckee(a);
    factor_spd_with_ordering(a, perm)
}

/// Factors with a caller-supplied ordering `perm[new] = old`.
pub fn factor_spd_with_ordering(a: &CsrMatrix, perm: Vec<usize>) -> Result<Factorization> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let inv = invert(&perm);

    // upper triangle of P A P^T by columns: column k holds rows i <= k
    let mut up_offsets = vec![0usize; n + 1];
    for k in 0..n {
        let old = perm[k];
        let cnt = a.row(old).0.iter().filter(|&&j| inv[j] <= k).count();
        up_offsets[k + 1] = up_offsets[k] + cnt;
    }
    let mut up_rows = vec![0usize; up_offsets[n]];
    let mut up_vals = vec![0.0f64; up_offsets[n]];
    let mut max_diag = 0.0f64;
    for k in 0..n {
        let old = perm[k];
        let mut pos = up_offsets[k];
        let (cols, vals) = a.row(old);
        for (&j, &v) in cols.iter().zip(vals) {
            let i = inv[j];
            if i <= k {
                up_rows[pos] = i;
                up_vals[pos] = v;
                pos += 1;
            }
            if j == old {
                max_diag = max_diag.max(v.abs());
            }
        }
    }
    let pivot_tol = PIVOT_TOLERANCE * max_diag;

    // elimination tree and column counts of L
    let mut etree = vec![NONE; n];
    let mut l_counts = vec![0usize; n];
    let mut mark = vec![NONE; n];
    for j in 0..n {
        mark[j] = j;
        for p in up_offsets[j]..up_offsets[j + 1] {
            let mut i = up_rows[p];
            while mark[i] != j {
                if etree[i] == NONE {
                    etree[i] = j;
                }
                l_counts[i] += 1;
                mark[i] = j;
                i = etree[i];
            }
        }
    }
    let mut l_offsets = vec![0usize; n + 1];
    for i in 0..n {
        l_offsets[i + 1] = l_offsets[i] + l_counts[i];
    }
    let lnz = l_offsets[n];
    let mut l_rows = vec![0usize; lnz];
    let mut l_values = vec![0.0f64; lnz];
    let mut next_in_col = l_offsets[..n].to_vec();

    let mut d = vec![0.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut used = vec![false; n];
    let mut pattern = Vec::with_capacity(n);
    let mut stack = Vec::with_capacity(n);

    for k in 0..n {
        // nonzero pattern of row k of L: etree reach of the column entries
        pattern.clear();
        let mut dk = 0.0;
        for p in up_offsets[k]..up_offsets[k + 1] {
            let i = up_rows[p];
            if i == k {
                dk += up_vals[p];
                continue;
            }
            y[i] += up_vals[p];
            if used[i] {
                continue;
            }
            stack.clear();
            let mut t = i;
            while t != NONE && t < k && !used[t] {
                used[t] = true;
                stack.push(t);
                t = etree[t];
            }
            while let Some(t) = stack.pop() {
                pattern.push(t);
            }
        }
        // topological order: process from the end of the reversed reach lists
        for &c in pattern.iter().rev() {
            let yc = y[c];
            let end = next_in_col[c];
            for p in l_offsets[c]..end {
                y[l_rows[p]] -= l_values[p] * yc;
            }
            let lkc = yc / d[c];
            l_rows[end] = k;
            l_values[end] = lkc;
            next_in_col[c] += 1;
            dk -= yc * lkc;
            y[c] = 0.0;
            used[c] = false;
        }
        if !(dk > pivot_tol) {
            return Err(Error::NotPositiveDefinite {
                index: perm[k],
                pivot: dk,
            });
        }
        d[k] = dk;
    }

    Ok(Factorization {
        n,
        perm,
        l_offsets,
        l_rows,
        l_values,
        d,
    })
}

/// Solves with a factorization, checking dimensions.
pub fn solve_factored(f: &Factorization, b: &[f64]) -> Result<Vec<f64>> {
    f.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solve_is_identity() {
        let f = factor_spd(&CsrMatrix::identity(2)).unwrap();
        assert_eq!(f.solve(&[5.0, 6.0]).unwrap(), vec![5.0, 6.0]);
    }

    #[test]
    fn diagonal_solve() {
        let f = factor_spd(&CsrMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_eq!(f.solve(&[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn two_by_two() {
        // Gaussian elimination by hand: x = (1/11, 7/11)
        let a = CsrMatrix::from_dense(&[vec![4.0, 1.0], vec![1.0, 3.0]]);
        let x = factor_spd(&a).unwrap().solve(&[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-15);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn indefinite_reports_index() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        match factor_spd(&a) {
            Err(Error::NotPositiveDefinite { pivot, .. }) => assert!(pivot < 0.0),
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }

    #[test]
    fn singular_detected() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(factor_spd(&a), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let f = factor_spd(&CsrMatrix::identity(3)).unwrap();
        assert!(f.solve(&[1.0]).is_err());
    }
}
