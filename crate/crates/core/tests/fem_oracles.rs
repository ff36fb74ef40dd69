mod common;

use common::*;
use rgdsw_stokes::experiments::Problem;
use rgdsw_stokes::fem::assembly::gather;
use rgdsw_stokes::fem::{
    assemble, assemble_bilinear, elementwise_avg_divergence, l2_error, manufactured_rhs, FeSpace,
    ManufacturedSolution, Order, Scenario, ScenarioKind,
};
use rgdsw_stokes::mesh::{build_box_mesh, BoxDomain};
use rgdsw_stokes::sparse::ldlt::factor_spd;

fn space(n: usize, order: Order, domain: BoxDomain) -> FeSpace {
    FeSpace::new(build_box_mesh(n, n, n, domain).unwrap(), order)
}

#[test]
fn linear_single_cell_matches_dense_oracle() {
    let s = space(1, Order::Linear, BoxDomain::unit_cube());
    let a = assemble_bilinear(&s, 1.0, 1.0).unwrap().to_dense();
    let oracle = dense_penalty_matrix(&s, 1.0);
    assert!(max_diff(&a, &oracle) <= 1e-12, "diff {}", max_diff(&a, &oracle));
}

#[test]
fn quadratic_and_stretched_meshes_match_dense_oracle() {
    for (n, order, eps) in [(1, Order::Quadratic, 1.0), (2, Order::Quadratic, 1e-3), (2, Order::Linear, 1e-2)] {
        let s = space(n, order, BoxDomain::new([0.0, -1.0, 0.5], [2.0, 0.5, 1.0]));
        let a = assemble_bilinear(&s, 1.0, 1.0 / eps).unwrap().to_dense();
        let oracle = dense_penalty_matrix(&s, eps);
        let tol = 1e-12 * max_abs(&oracle).max(1.0);
        assert!(max_diff(&a, &oracle) <= tol, "{n} {order:?}: diff {}", max_diff(&a, &oracle));
    }
}

#[test]
fn penalty_energy_scales_inversely_with_epsilon() {
    let s = space(2, Order::Quadratic, BoxDomain::unit_cube());
    let u = s.interpolate(|x| [x[0] * x[1], x[2] * x[2], x[0]]);
    let stiffness = assemble_bilinear(&s, 1.0, 0.0).unwrap();
    let penalty = |eps: f64| {
        let a = assemble_bilinear(&s, 1.0, 1.0 / eps).unwrap();
        let au = a.spmv(&u).unwrap();
        let ku = stiffness.spmv(&u).unwrap();
        u.iter().zip(au.iter().zip(&ku)).map(|(x, (p, q))| x * (p - q)).sum::<f64>()
    };
    let e1 = penalty(1.0);
    assert!(e1 > 0.0);
    for eps in [1e-1, 1e-2, 1e-4] {
        assert!((penalty(eps) * eps - e1).abs() <= 1e-10 * e1, "eps {eps}");
    }
}

#[test]
fn average_divergence_is_projection_onto_constants() {
    // the elementwise average of div u for u = (x^2, 0, 0) is twice the centroid x
    let s = space(2, Order::Quadratic, BoxDomain::unit_cube());
    let u = s.interpolate(|x| [x[0] * x[0], 0.0, 0.0]);
    for t in 0..s.num_elements() {
        let avg = elementwise_avg_divergence(&s, t, &gather(&s, t, &u)).unwrap();
        let c = s.mesh().tet_centroid(t);
        assert!((avg - 2.0 * c[0]).abs() < 1e-12, "element {t}");
    }
}

#[test]
fn manufactured_velocity_is_divergence_free() {
    for p in random_points(100, 11) {
        assert!(u_ref_divergence(&p).abs() <= 1e-12);
        assert!(ManufacturedSolution::stream_function_divergence(&p).abs() <= 1e-12);
    }
}

#[test]
fn manufactured_force_matches_exact_derivatives() {
    let f = manufactured_rhs(&ManufacturedSolution::stream_function());
    for p in random_points(20, 5) {
        let (got, want) = (f(&p), manufactured_force(&p));
        for c in 0..3 {
            assert!((got[c] - want[c]).abs() <= 1e-10, "{p:?} component {c}");
        }
    }
}

#[test]
fn manufactured_force_matches_finite_differences() {
    let sol = ManufacturedSolution::stream_function();
    let f = manufactured_rhs(&sol);
    let h = 1e-3;
    for p in random_points(20, 9) {
        let mut lap = [0.0; 3];
        for d in 0..3 {
            let at = |s: f64| {
                let mut q = p;
                q[d] += s * h;
                (sol.velocity)(&q)
            };
            let (m2, m1, z, p1, p2) = (at(-2.0), at(-1.0), at(0.0), at(1.0), at(2.0));
            for c in 0..3 {
                lap[c] += (-m2[c] + 16.0 * m1[c] - 30.0 * z[c] + 16.0 * p1[c] - p2[c]) / (12.0 * h * h);
            }
        }
        let fp = f(&p);
        let grad_p = [1.0 - 2.0 * p[0], 0.0, 0.0];
        for c in 0..3 {
            assert!((fp[c] - (-lap[c] + grad_p[c])).abs() <= 1e-6, "{p:?} component {c}");
        }
    }
}

#[test]
fn l2_error_reference_values() {
    let s = space(2, Order::Quadratic, BoxDomain::unit_cube());
    let zero = vec![0.0; s.num_dofs()];
    assert!((l2_error(&s, &zero, &|_| [1.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-13);
    let expect = 1.0 / 3f64.sqrt();
    assert!((l2_error(&s, &zero, &|x| [x[0], 0.0, 0.0]).unwrap() - expect).abs() < 1e-13);
    let quad = |x: &[f64; 3]| [x[0] * x[1], x[2] * x[2], 1.0 - x[0]];
    assert!(l2_error(&s, &s.interpolate(quad), &quad).unwrap() <= 1e-12);
}

#[test]
fn quadratic_convergence_under_refinement() {
    let mut errors = Vec::new();
    for n in [2, 4, 8] {
        let p = Problem::build(ScenarioKind::CubeManufactured, n, 2, 1e-4).unwrap();
        let u = factor_spd(&p.system.matrix).unwrap().solve(&p.system.rhs).unwrap();
        errors.push(p.l2_error(&p.system.expand(&u)).unwrap().unwrap());
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    // asymptotically second order in L2 for the averaged-divergence pair
    assert!(errors[1] / errors[2] > 3.0, "{errors:?}");
}

#[test]
fn body_force_solution_vanishes_on_the_wall() {
    let p = Problem::build(ScenarioKind::CubeBodyForce, 4, 2, 1e-4).unwrap();
    let u = p.system.expand(&factor_spd(&p.system.matrix).unwrap().solve(&p.system.rhs).unwrap());
    let s = &p.space;
    let coords = s.node_coords();
    for (node, x) in coords.iter().enumerate() {
        if x.iter().any(|&c| c.abs() < 1e-12 || (c - 1.0).abs() < 1e-12) {
            for c in 0..3 {
                assert_eq!(u[s.dof(c, node)], 0.0);
            }
        }
    }
    // the force (0, x - 1/2, 0) drives a nonzero flow
    assert!(u.iter().any(|v| v.abs() > 1e-6));
}

#[test]
fn assembled_system_is_symmetric_with_dirichlet_values_in_place() {
    let s = space(2, Order::Quadratic, BoxDomain::unit_cube());
    let scenario = Scenario::new(ScenarioKind::CubeManufactured, 1e-2).unwrap();
    let sys = assemble(&s, &scenario).unwrap();
    assert_eq!(sys.matrix.asymmetry(), 0.0);
    for (&d, &v) in sys.constraints.dofs.iter().zip(&sys.constraints.values) {
        assert_eq!(sys.matrix.get(d, d), 1.0);
        assert_eq!(sys.rhs[d], v);
    }
}
