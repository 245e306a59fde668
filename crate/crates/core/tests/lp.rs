use ginv::harness::{gen_instance, GenSpec};
use ginv::lp::*;
use ginv::search::{ah_symmetric_ginv, sym_reflexive_ginv};
use ginv::verify::check_properties;
use ginv::{DenseMatrix, Error, SearchConfig, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn solve(model: &LpModel) -> LpSolution {
    simplex_solve(model, &SimplexOptions::default()).unwrap()
}

#[test]
fn ah_example_values() {
    let a = DenseMatrix::from_rows(&[[1.0, 3.0, 8.0], [2.0, 2.0, 8.0], [3.0, 1.0, 8.0]]);
    let p13 = solve(&build_p13(&a, &tol()).unwrap());
    assert!((p13.objective_value - 25.0 / 24.0).abs() < 1e-8);
    let hhat = ah_symmetric_ginv(&a, &SearchConfig::default()).unwrap();
    let p123 = solve(&build_p123(&a, &hhat, &tol()).unwrap());
    assert!((p123.objective_value - 9.0 / 8.0).abs() < 1e-8);
    let rep = check_properties(&a, &p123.h, &tol()).unwrap();
    assert!(rep.p1() && rep.p2() && rep.p3());
}

#[test]
fn symmetric_example_values() {
    let a = DenseMatrix::from_rows(&[[5.0, 4.0, 2.0], [4.0, 5.0, -2.0], [2.0, -2.0, 8.0]]);
    let sol = solve(&build_p1_sym(&a, &tol()).unwrap());
    assert!(sol.h.asymmetry().unwrap() < 1e-12);
    let rep = check_properties(&a, &sol.h, &tol()).unwrap();
    assert!(rep.p1());
    // the symmetric search result is feasible, so the LP can only do better
    let search = sym_reflexive_ginv(&a, &SearchConfig::default()).unwrap();
    assert!(sol.objective_value <= search.one_norm + 1e-9);
    let p1 = solve(&build_p1(&a, &tol()).unwrap());
    assert!(p1.objective_value <= sol.objective_value + 1e-9);
}

#[test]
fn zero_matrix_rejected() {
    let z = DenseMatrix::zeros(2, 3);
    assert_eq!(build_p1(&z, &tol()).unwrap_err(), Error::ZeroMatrix);
    assert_eq!(build_p13(&z, &tol()).unwrap_err(), Error::ZeroMatrix);
}

#[test]
fn export_has_all_rows_and_bounds() {
    let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
    let model = build_p1(&a, &tol()).unwrap();
    let text = export_lp(&model);
    assert!(text.contains("Minimize"));
    assert_eq!(text.matches(" c").count(), model.num_rows());
    assert!(text.contains("xp_1_0 >= 0"));
    assert!(text.trim_end().ends_with("End"));
}

fn nnz_ok(kind: LpKind, sol: &LpSolution, m: usize, n: usize, r: usize) -> bool {
    sol.h.nnz(1e-6) <= vertex_nnz_bound(kind, m, n, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn vertices_are_sparse(seed in 0u64..1_000_000, m in 2usize..7, n in 2usize..6, r in 1usize..4) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        let p1 = solve(&build_p1(&a, &tol()).unwrap());
        prop_assert!(nnz_ok(LpKind::P1, &p1, m, n, r));
        let p13 = solve(&build_p13(&a, &tol()).unwrap());
        prop_assert!(nnz_ok(LpKind::P13, &p13, m, n, r));
        let hhat = ah_symmetric_ginv(&a, &SearchConfig::default()).unwrap();
        let p123 = solve(&build_p123(&a, &hhat, &tol()).unwrap());
        prop_assert!(nnz_ok(LpKind::P123, &p123, m, n, r));
        // nested feasible sets give ordered optima, and the block is feasible for P123
        prop_assert!(p1.objective_value <= p13.objective_value + 1e-7);
        prop_assert!(p13.objective_value <= p123.objective_value + 1e-7);
        prop_assert!(p123.objective_value <= hhat.one_norm + 1e-7);
        let rep = check_properties(&a, &p123.h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.p3());
    }

    #[test]
    fn symmetric_vertices_are_sparse(seed in 0u64..1_000_000, n in 2usize..7, r in 1usize..4) {
        prop_assume!(r <= n);
        let a = gen_instance(&GenSpec::symmetric(n, r, seed)).unwrap();
        let sol = solve(&build_p1_sym(&a, &tol()).unwrap());
        prop_assert!(nnz_ok(LpKind::P1Sym, &sol, n, n, r));
        let rep = check_properties(&a, &sol.h, &tol()).unwrap();
        prop_assert!(rep.p1());
    }
}
