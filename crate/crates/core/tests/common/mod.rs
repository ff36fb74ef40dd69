//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's quadrature, shape functions, interface or Schwarz code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rgdsw_stokes::fem::FeSpace;
use rgdsw_stokes::mesh::{Mesh, TET_EDGES};
use rgdsw_stokes::partition::Partition;

// ---------------------------------------------------------------- dense algebra

pub type Dense = Vec<Vec<f64>>;

pub fn zeros(r: usize, c: usize) -> Dense {
    vec![vec![0.0; c]; r]
}

pub fn max_abs(a: &Dense) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

pub fn mat_mul(a: &Dense, b: &Dense) -> Dense {
    let mut c = zeros(a.len(), b[0].len());
    for i in 0..a.len() {
        for k in 0..b.len() {
            let aik = a[i][k];
            if aik != 0.0 {
                for j in 0..b[0].len() {
                    c[i][j] += aik * b[k][j];
                }
            }
        }
    }
    c
}

pub fn transpose(a: &Dense) -> Dense {
    let mut t = zeros(a[0].len(), a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    t
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, p);
        let d = m[col][col];
        assert!(d.abs() > 1e-300, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Plain Cholesky; `None` when a pivot is not positive.
pub fn cholesky(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let mut l = zeros(n, n);
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if d <= 0.0 {
            return None;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / l[j][j];
        }
    }
    Some(l)
}

pub fn slice(a: &Dense, rows: &[usize], cols: &[usize]) -> Dense {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect()
}

/// `sum_i R_i^T A_i^{-1} R_i + Phi (Phi^T A Phi)^{-1} Phi^T`, densely.
pub fn dense_two_level(a: &Dense, sets: &[Vec<usize>], phi: &Dense) -> Dense {
    let n = a.len();
    let a0 = mat_mul(&transpose(phi), &mat_mul(a, phi));
    let mut m = mat_mul(phi, &mat_mul(&inverse(&a0), &transpose(phi)));
    for set in sets {
        let inv = inverse(&slice(a, set, set));
        for (p, &i) in set.iter().enumerate() {
            for (q, &j) in set.iter().enumerate() {
                m[i][j] += inv[p][q];
            }
        }
    }
    assert_eq!(m.len(), n);
    m
}

// ---------------------------------------------------------------- element oracle

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Exact `int_T prod lambda_i^{e_i} dx`.
pub fn barycentric_integral(exps: [usize; 4], volume: f64) -> f64 {
    let num: f64 = exps.iter().map(|&e| factorial(e)).product();
    num * factorial(3) * volume / factorial(exps.iter().sum::<usize>() + 3)
}

/// Gradients of the barycentric coordinates and the volume, by inverting the
/// affine map with Cramer's rule.
pub fn barycentric_gradients(v: &[[f64; 3]; 4]) -> ([[f64; 3]; 4], f64) {
    let j = [
        [v[1][0] - v[0][0], v[2][0] - v[0][0], v[3][0] - v[0][0]],
        [v[1][1] - v[0][1], v[2][1] - v[0][1], v[3][1] - v[0][1]],
        [v[1][2] - v[0][2], v[2][2] - v[0][2], v[3][2] - v[0][2]],
    ];
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    // rows of J^{-1} are the gradients of lambda_1..3
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        let m = j[rs[0]][cs[0]] * j[rs[1]][cs[1]] - j[rs[0]][cs[1]] * j[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            m
        } else {
            -m
        }
    };
    let mut g = [[0.0; 3]; 4];
    for k in 0..3 {
        for d in 0..3 {
            g[k + 1][d] = cof(d, k) / det;
        }
    }
    for d in 0..3 {
        g[0][d] = -(g[1][d] + g[2][d] + g[3][d]);
    }
    (g, det.abs() / 6.0)
}

/// A gradient term `coef * lambda^exps * grad lambda_k`.
type GradTerm = (f64, [usize; 4], usize);

fn shape_gradient_terms(k: usize, local: usize) -> Vec<GradTerm> {
    let unit = |i: usize| {
        let mut e = [0; 4];
        e[i] = 1;
        e
    };
    if k == 1 {
        return vec![(1.0, [0; 4], local)];
    }
    if local < 4 {
        vec![(4.0, unit(local), local), (-1.0, [0; 4], local)]
    } else {
        let [a, b] = TET_EDGES[local - 4];
        vec![(4.0, unit(b), a), (4.0, unit(a), b)]
    }
}

/// Element stiffness (vector Laplacian) and integrated divergence rows,
/// component-blocked like the space: local index `c * nloc + i`.
pub fn element_oracle(k: usize, v: &[[f64; 3]; 4]) -> (Dense, Vec<f64>, f64) {
    let nloc = if k == 1 { 4 } else { 10 };
    let (g, vol) = barycentric_gradients(v);
    let dot = |a: usize, b: usize| (0..3).map(|d| g[a][d] * g[b][d]).sum::<f64>();
    let mut scalar = zeros(nloc, nloc);
    for i in 0..nloc {
        for j in 0..nloc {
            let mut s = 0.0;
            for (ci, ei, ki) in shape_gradient_terms(k, i) {
                for (cj, ej, kj) in shape_gradient_terms(k, j) {
                    let e = [ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2], ei[3] + ej[3]];
                    s += ci * cj * dot(ki, kj) * barycentric_integral(e, vol);
                }
            }
            scalar[i][j] = s;
        }
    }
    let mut stiff = zeros(3 * nloc, 3 * nloc);
    let mut d = vec![0.0; 3 * nloc];
    for c in 0..3 {
        for i in 0..nloc {
            for j in 0..nloc {
                stiff[c * nloc + i][c * nloc + j] = scalar[i][j];
            }
            d[c * nloc + i] = shape_gradient_terms(k, i)
                .iter()
                .map(|&(coef, e, kk)| coef * g[kk][c] * barycentric_integral(e, vol))
                .sum();
        }
    }
    (stiff, d, vol)
}

/// Dense global matrix `grad:grad + eps^{-1} (avg div)(avg div)` over all dofs.
pub fn dense_penalty_matrix(space: &FeSpace, eps: f64) -> Dense {
    let k = space.order().degree();
    let nloc = space.order().local_nodes();
    let mut a = zeros(space.num_dofs(), space.num_dofs());
    for t in 0..space.num_elements() {
        let v = space.mesh().tet_vertices(t);
        let (stiff, d, vol) = element_oracle(k, &v);
        let nodes = space.element_nodes(t);
        let gdof = |l: usize| space.dof(l / nloc, nodes[l % nloc]);
        for p in 0..3 * nloc {
            for q in 0..3 * nloc {
                a[gdof(p)][gdof(q)] += stiff[p][q] + d[p] * d[q] / (eps * vol);
            }
        }
    }
    a
}

// ---------------------------------------------------------------- hyper-dual numbers

/// `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`: exact first and second
/// derivatives of smooth expressions.
#[derive(Debug, Clone, Copy)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub fn constant(x: f64) -> Self {
        Self { re: x, e1: 0.0, e2: 0.0, e12: 0.0 }
    }

    pub fn variable(x: f64, d1: f64, d2: f64) -> Self {
        Self { re: x, e1: d1, e2: d2, e12: 0.0 }
    }

    pub fn powi(self, n: i32) -> Self {
        (0..n).fold(Self::constant(1.0), |acc, _| acc * self)
    }
}

impl std::ops::Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, e1: self.e1 + o.e1, e2: self.e2 + o.e2, e12: self.e12 + o.e12 }
    }
}

impl std::ops::Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, e1: self.e1 - o.e1, e2: self.e2 - o.e2, e12: self.e12 - o.e12 }
    }
}

impl std::ops::Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re,
            e1: self.re * o.e1 + self.e1 * o.re,
            e2: self.re * o.e2 + self.e2 * o.re,
            e12: self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        }
    }
}

impl std::ops::Mul<HyperDual> for f64 {
    type Output = HyperDual;
    fn mul(self, o: HyperDual) -> HyperDual {
        HyperDual::constant(self) * o
    }
}

/// The manufactured velocity written out term by term.
pub fn u_ref_generic(x: HyperDual, y: HyperDual) -> [HyperDual; 2] {
    let one = HyperDual::constant(1.0);
    let ax = x.powi(2) * (one - x.powi(2)).powi(2);
    let ay = y.powi(2) * (one - y.powi(2)).powi(2);
    let dax = 2.0 * x - 8.0 * x.powi(3) + 6.0 * x.powi(5);
    let day = 2.0 * y - 8.0 * y.powi(3) + 6.0 * y.powi(5);
    [ax * day, HyperDual::constant(-1.0) * ay * dax]
}

/// Divergence of the manufactured velocity from exact first derivatives.
pub fn u_ref_divergence(p: &[f64; 3]) -> f64 {
    let dx = u_ref_generic(HyperDual::variable(p[0], 1.0, 0.0), HyperDual::constant(p[1]));
    let dy = u_ref_generic(HyperDual::constant(p[0]), HyperDual::variable(p[1], 1.0, 0.0));
    dx[0].e1 + dy[1].e1
}

/// `-Laplace(u_ref) + grad(x (1 - x))` from exact second derivatives.
pub fn manufactured_force(p: &[f64; 3]) -> [f64; 3] {
    let dxx = u_ref_generic(HyperDual::variable(p[0], 1.0, 1.0), HyperDual::constant(p[1]));
    let dyy = u_ref_generic(HyperDual::constant(p[0]), HyperDual::variable(p[1], 1.0, 1.0));
    [
        -(dxx[0].e12 + dyy[0].e12) + 1.0 - 2.0 * p[0],
        -(dxx[1].e12 + dyy[1].e12),
        0.0,
    ]
}

// ---------------------------------------------------------------- decompositions

/// Element partition into a `px x py x pz` grid of boxes by centroid.
pub fn box_partition(mesh: &Mesh, grid: [usize; 3]) -> Partition {
    let parts: Vec<usize> = (0..mesh.num_tets())
        .map(|t| {
            let c = mesh.tet_centroid(t);
            let idx: Vec<usize> = (0..3)
                .map(|d| {
                    let lo = mesh.domain.lo[d];
                    let hi = mesh.domain.hi[d];
                    (((c[d] - lo) / (hi - lo) * grid[d] as f64).floor() as usize).min(grid[d] - 1)
                })
                .collect();
            idx[0] + grid[0] * (idx[1] + grid[1] * idx[2])
        })
        .collect();
    Partition::from_assignment(parts, grid.iter().product()).unwrap()
}

/// Subdomain set of every scalar node, by scanning elements.
pub fn node_subdomain_sets(space: &FeSpace, partition: &Partition) -> Vec<BTreeSet<usize>> {
    let mut sets = vec![BTreeSet::new(); space.num_nodes()];
    for t in 0..space.num_elements() {
        for &v in space.element_nodes(t) {
            sets[v].insert(partition.part_of(t));
        }
    }
    sets
}

/// Number of distinct interface subdomain sets that are not strictly contained
/// in another one, by pairwise subset tests.
pub fn brute_force_coarse_count(sets: &[BTreeSet<usize>]) -> usize {
    let mut distinct: Vec<&BTreeSet<usize>> = sets.iter().filter(|s| s.len() >= 2).collect();
    distinct.sort();
    distinct.dedup();
    distinct
        .iter()
        .filter(|s| !distinct.iter().any(|o| o.len() > s.len() && s.is_subset(o)))
        .count()
}

// ---------------------------------------------------------------- deterministic points

/// Reproducible pseudo-random points in the unit cube (SplitMix64).
pub fn random_points(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count).map(|_| [next(), next(), next()]).collect()
}
