mod common;

use std::collections::BTreeSet;

use common::*;
use rgdsw_stokes::decomposition::{extend_overlap, restriction, Decomposition};
use rgdsw_stokes::experiments::{prepare, solve, Problem, SolverSettings};
use rgdsw_stokes::fem::ScenarioKind;
use rgdsw_stokes::interface::InterfaceStructure;
use rgdsw_stokes::pcg::Preconditioner;
use rgdsw_stokes::rgdsw::CoarseBasis;
use rgdsw_stokes::schwarz::{PreconditionerKind, SchwarzPreconditioner};

fn settings(subdomains: usize, precond: PreconditionerKind) -> SolverSettings {
    SolverSettings {
        subdomains,
        overlap: 2,
        precond,
        tol: 1e-8,
        maxit: 2000,
        random_seed: None,
    }
}

#[test]
fn overlap_matches_breadth_first_search_on_dense_pattern() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 3, 1, 1e-2).unwrap();
    let a = p.system.matrix.to_dense();
    let n = a.len();
    let partition = box_partition(p.space.mesh(), [3, 1, 1]);
    let dec = Decomposition::build(&p.space, &partition, &p.system, 0);
    for layers in 0..4 {
        let grown = extend_overlap(&p.system.matrix, &dec.base, layers);
        for (base, got) in dec.base.iter().zip(&grown) {
            let mut set: BTreeSet<usize> = base.iter().copied().collect();
            for _ in 0..layers {
                let frontier: Vec<usize> = (0..n).filter(|&j| set.iter().any(|&i| a[i][j] != 0.0)).collect();
                set.extend(frontier);
            }
            assert_eq!(got, &set.into_iter().collect::<Vec<_>>(), "layers {layers}");
        }
    }
}

#[test]
fn restriction_extracts_dense_blocks() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 2, 2, 1e-3).unwrap();
    let a = &p.system.matrix;
    let partition = box_partition(p.space.mesh(), [2, 2, 1]);
    let dec = Decomposition::build(&p.space, &partition, &p.system, 1);
    let dense = a.to_dense();
    for set in &dec.overlapping {
        let r = restriction(set, a.nrows()).unwrap();
        let rart = r.matmul(&a.matmul(&r.transpose()).unwrap()).unwrap();
        assert_eq!(rart.to_dense(), slice(&dense, set, set));
        assert_eq!(a.principal_submatrix(set).unwrap().to_dense(), slice(&dense, set, set));
    }
    // every free dof is owned by exactly one subdomain
    let mut owners = vec![0; a.nrows()];
    for set in &dec.owned {
        for &i in set {
            owners[i] += 1;
        }
    }
    assert!(owners.iter().all(|&c| c == 1));
}

#[test]
fn necs_match_brute_force_grouping() {
    for grid in [[2, 1, 1], [2, 2, 1], [2, 2, 2], [3, 3, 3], [3, 2, 1]] {
        let p = Problem::build(ScenarioKind::CubeBodyForce, 6, 2, 1e-4).unwrap();
        let partition = box_partition(p.space.mesh(), grid);
        let s = InterfaceStructure::build(&p.space, &partition, &p.system.constraints).unwrap();
        let sets = node_subdomain_sets(&p.space, &partition);
        let mask = p.system.constraints.mask(p.space.num_dofs());
        let expected_gamma: Vec<usize> = (0..p.space.num_nodes())
            .filter(|&v| sets[v].len() >= 2 && (0..3).all(|c| !mask[p.space.dof(c, v)]))
            .collect();
        assert_eq!(s.gamma(), expected_gamma.as_slice(), "{grid:?}");
        for nec in &s.necs {
            for &v in &nec.nodes {
                assert_eq!(sets[v].iter().copied().collect::<Vec<_>>(), nec.subdomains);
            }
        }
        let gamma_sets: Vec<BTreeSet<usize>> = expected_gamma.iter().map(|&v| sets[v].clone()).collect();
        assert_eq!(s.num_coarse_nodes(), brute_force_coarse_count(&gamma_sets), "{grid:?}");
        // the nec count is the number of distinct subdomain sets
        let distinct: BTreeSet<&BTreeSet<usize>> = gamma_sets.iter().collect();
        assert_eq!(s.necs.len(), distinct.len());
    }
}

#[test]
fn box_grids_have_expected_coarse_nodes() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 6, 2, 1e-4).unwrap();
    for (grid, necs, coarse) in [([2, 1, 1], 1, 1), ([2, 2, 1], 5, 1), ([2, 2, 2], 19, 1), ([3, 3, 3], 98, 8)] {
        let partition = box_partition(p.space.mesh(), grid);
        let s = InterfaceStructure::build(&p.space, &partition, &p.system.constraints).unwrap();
        assert_eq!((s.necs.len(), s.num_coarse_nodes()), (necs, coarse), "{grid:?}");
    }
}

#[test]
fn harmonic_extension_minimizes_energy() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 4, 2, 1e-2).unwrap();
    let a = &p.system.matrix;
    let partition = box_partition(p.space.mesh(), [2, 2, 2]);
    let s = InterfaceStructure::build(&p.space, &partition, &p.system.constraints).unwrap();
    let basis = CoarseBasis::build(&p.system, &p.space, &s).unwrap();
    let energy = |v: &[f64]| v.iter().zip(a.spmv(v).unwrap()).map(|(x, y)| x * y).sum::<f64>();
    for c in 0..basis.dim() {
        let e = vec_unit(basis.dim(), c);
        let phi = basis.phi.spmv(&e).unwrap();
        let base = energy(&phi);
        for (k, seed) in (0..5).zip(100u64..) {
            let noise = random_points(basis.split.interior.len(), seed + c as u64);
            let mut w = phi.clone();
            for (&i, q) in basis.split.interior.iter().zip(&noise) {
                w[i] += 1e-3 * (q[k % 3] - 0.5);
            }
            assert!(energy(&w) >= base, "column {c}");
        }
    }
}

fn vec_unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

#[test]
fn two_level_operator_matches_dense_assembly() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 2, 2, 1e-4).unwrap();
    let prepared = prepare(&p, &settings(2, PreconditionerKind::TwoLevelRgdsw)).unwrap();
    let m = prepared.preconditioner.as_ref().unwrap();
    let a = p.system.matrix.to_dense();
    let n = a.len();
    let oracle = dense_two_level(&a, &prepared.decomposition.as_ref().unwrap().overlapping, &prepared.coarse.as_ref().unwrap().phi.to_dense());
    let applied = transpose(&(0..n).map(|i| m.apply_to(&vec_unit(n, i)).unwrap()).collect::<Vec<_>>());
    assert!(max_diff(&applied, &oracle) <= 1e-12 * max_abs(&oracle).max(1.0));
    assert!(max_diff(&applied, &transpose(&applied)) <= 1e-12 * max_abs(&applied));
    assert!(cholesky(&applied).is_some());
}

#[test]
fn schwarz_apply_is_linear() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 4, 2, 1e-4).unwrap();
    let prepared = prepare(&p, &settings(8, PreconditionerKind::TwoLevelRgdsw)).unwrap();
    let m = prepared.preconditioner.as_ref().unwrap();
    let n = p.system.num_free();
    let x: Vec<f64> = random_points(n, 1).iter().map(|q| q[0] - 0.5).collect();
    let y: Vec<f64> = random_points(n, 2).iter().map(|q| q[1] - 0.5).collect();
    let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.5 * a - 0.75 * b).collect();
    let (mx, my, mc) = (m.apply_to(&x).unwrap(), m.apply_to(&y).unwrap(), m.apply_to(&combo).unwrap());
    let scale = mc.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for i in 0..n {
        assert!((mc[i] - (2.5 * mx[i] - 0.75 * my[i])).abs() <= 1e-10 * scale);
    }
    // symmetric: <M x, y> = <x, M y>
    let lhs: f64 = mx.iter().zip(&y).map(|(a, b)| a * b).sum();
    let rhs: f64 = x.iter().zip(&my).map(|(a, b)| a * b).sum();
    assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()));
}

#[test]
fn single_subdomain_is_an_exact_solve() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 3, 2, 1e-4).unwrap();
    let r = solve(&p, &settings(1, PreconditionerKind::OneLevel)).unwrap();
    assert!(r.report.converged && r.report.iterations <= 2);
}

#[test]
fn solution_is_independent_of_the_preconditioner() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 4, 2, 1e-4).unwrap();
    let none = solve(&p, &settings(8, PreconditionerKind::None)).unwrap();
    let two = solve(&p, &settings(8, PreconditionerKind::TwoLevelRgdsw)).unwrap();
    assert!(none.report.converged && two.report.converged);
    assert!(two.report.iterations <= none.report.iterations);
    let diff = none.solution.iter().zip(&two.solution).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm = none.solution.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!(diff <= 1e-6 * norm, "relative difference {}", diff / norm);
}

#[test]
fn coarse_dimension_counts_three_per_coarse_node() {
    let mut dims = Vec::new();
    for g in [2, 3] {
        let p = Problem::build(ScenarioKind::CubeBodyForce, 2 * g, 1, 1e-4).unwrap();
        let r = solve(&p, &settings(g * g * g, PreconditionerKind::TwoLevelRgdsw)).unwrap();
        assert_eq!(r.coarse_dim, 3 * r.coarse_nodes);
        dims.push(r.coarse_dim);
    }
    assert!(dims[0] < dims[1]);
}

#[test]
fn runs_are_deterministic() {
    let p = Problem::build(ScenarioKind::CubeManufactured, 4, 2, 1e-3).unwrap();
    let s = SolverSettings {
        random_seed: Some(42),
        ..settings(8, PreconditionerKind::TwoLevelRgdsw)
    };
    let (a, b) = (solve(&p, &s).unwrap(), solve(&p, &s).unwrap());
    assert_eq!(a.report.iterations, b.report.iterations);
    assert_eq!(a.report.residual_history, b.report.residual_history);
    assert_eq!(a.solution, b.solution);
    let q = Problem::build(ScenarioKind::CubeManufactured, 4, 2, 1e-3).unwrap();
    assert_eq!(q.system.matrix, p.system.matrix);
    assert_eq!(q.system.rhs, p.system.rhs);
}

#[test]
fn schwarz_rejects_wrong_lengths() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 2, 1, 1e-2).unwrap();
    let partition = box_partition(p.space.mesh(), [2, 1, 1]);
    let dec = Decomposition::build(&p.space, &partition, &p.system, 1);
    let m = SchwarzPreconditioner::setup(&p.system.matrix, &dec, None).unwrap();
    let mut z = vec![0.0; 3];
    assert!(m.apply(&[1.0, 2.0], &mut z).is_err());
}
