use ginv::blocks::{column_block, general_block, symmetric_block};
use ginv::families::*;
use ginv::linalg::{det, inverse, numerical_rank, pseudoinverse};
use ginv::lp::{build_p123, build_p1_sym, simplex_solve, SimplexOptions};
use ginv::search::ah_symmetric_ginv;
use ginv::verify::check_properties;
use ginv::{DenseMatrix, IndexSet, SearchConfig, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn set(v: &[usize], n: usize) -> IndexSet {
    IndexSet::new(v.to_vec(), n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[test]
fn worked_examples_reproduce_known_values() {
    let f = sym_3x3();
    let h = f.known_h.as_ref().unwrap();
    let rep = check_properties(&f.a, h, &tol()).unwrap();
    assert!(rep.p1() && rep.p2() && rep.p3());
    assert!((h.one_norm() - f.known("opt_onenorm")).abs() < 1e-12);
    for (key, s) in [("block_norm_01", [0, 1]), ("block_norm_02", [0, 2]), ("block_norm_12", [1, 2])] {
        let res = symmetric_block(&f.a, &set(&s, 3), &tol()).unwrap();
        assert!((res.one_norm - f.known(key)).abs() < 1e-12, "{key}");
    }

    let f = ah_3x3();
    let h = f.known_h.as_ref().unwrap();
    let rep = check_properties(&f.a, h, &tol()).unwrap();
    assert!(rep.p1() && rep.p2() && rep.p3() && rep.reflexive);
    for (key, t) in [("block_norm_01", [0, 1]), ("block_norm_02", [0, 2]), ("block_norm_12", [1, 2])] {
        let res = column_block(&f.a, &set(&t, 3), &tol()).unwrap();
        assert!((res.one_norm - f.known(key)).abs() < 1e-12, "{key}: {}", res.one_norm);
    }
}

#[test]
fn toeplitz_closed_forms() {
    for r in 3..=5 {
        for case in [ToeplitzCase::General, ToeplitzCase::Ah] {
            let f = toeplitz_family(r, 1e-3, 0.0, case).unwrap();
            assert!(rel(f.known("inv_norm"), f.known("inv_norm_formula")) < 1e-8);
            let rf = r as f64;
            let a_formula = rf + (rf.powi(3) - rf) / 6.0 * 1e-3;
            assert!(rel(f.known("swap_b_norm"), a_formula) < 1e-8);
            assert!(rel(f.known("swap_cb_norm"), f.known("swap_cb_norm_formula")) < 1e-8);
        }
        let f = toeplitz_family(r, 1e-3, 1e-3, ToeplitzCase::Symmetric).unwrap();
        assert!(rel(f.known("inv_norm"), f.known("inv_norm_formula")) < 1e-8);
        assert!(rel(f.known("swap_cb_norm"), f.known("swap_cb_norm_formula")) < 1e-8);
        assert_eq!(f.a.asymmetry(), Some(0.0));
    }
}

#[test]
fn toeplitz_norms_match_block_inverses() {
    let r = 4;
    let f = toeplitz_family(r, 2e-3, 1e-3, ToeplitzCase::General).unwrap();
    assert_eq!(numerical_rank(&f.a, &tol()), r);
    let top: Vec<usize> = (0..r).collect();
    let base = general_block(&f.a, &set(&top, r + 2), &set(&top, r + 2), &tol()).unwrap();
    assert!(rel(base.one_norm, f.known("inv_norm")) < 1e-8);

    // direct inversion of Ã₁(b) against the rank-one update formula
    let mut swap_b = f.a.submatrix(&top, &top);
    for i in 0..r {
        swap_b.set(i, 0, f.a.get(i, r));
    }
    let inv = inverse(&swap_b).unwrap();
    assert!(rel(inv.one_norm(), f.known("swap_b_norm")) < 1e-8);

    let swapped: Vec<usize> = (1..=r).collect();
    let both = general_block(&f.a, &set(&swapped, r + 2), &set(&swapped, r + 2), &tol()).unwrap();
    assert!(rel(both.one_norm, f.known("swap_cb_norm")) < 1e-8);
}

#[test]
fn no_constant_ratio_family_values() {
    let f = no_const_rank2(10.0).unwrap();
    let local = column_block(&f.a, &set(&[0, 1], 4), &tol()).unwrap();
    assert!((local.one_norm - 2.0).abs() < 1e-12);
    for t in [[0, 2], [0, 3], [1, 2], [1, 3]] {
        let res = column_block(&f.a, &set(&t, 4), &tol()).unwrap();
        assert!((res.one_norm - f.known("neighbor_norm")).abs() < 1e-12);
    }
    let esc = column_block(&f.a, &set(&[2, 3], 4), &tol()).unwrap();
    assert!((esc.one_norm - 0.2).abs() < 1e-12);

    let f = no_const_general(3, 5.0).unwrap();
    let esc = column_block(&f.a, &set(&[3, 4, 5], 6), &tol()).unwrap();
    assert!((esc.one_norm - 0.6).abs() < 1e-12);
    assert!((det(&tilde_a(3, -1.0, 1.0)).unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(f.known("tilde_det"), 4.0);
    let near = column_block(&f.a, &set(&[0, 1, 3], 6), &tol()).unwrap();
    assert!((near.one_norm - f.known("neighbor_norm")).abs() < 1e-12);
    assert!(no_const_rank2(0.0).is_err());
    assert!(no_const_general(2, 1.0).is_err());
}

#[test]
fn tight_ratio_family() {
    for r in 2..=4 {
        let f = tight_ratio_r_plus_1(r).unwrap();
        let rf = r as f64;
        assert!((f.known("expected_ratio") - 2.0 * rf / (rf + 1.0)).abs() < 1e-15);
        let first: Vec<usize> = (0..r).collect();
        let res = column_block(&f.a, &set(&first, r + 1), &tol()).unwrap();
        assert!(rel(res.one_norm, f.known("block_norm")) < 1e-10);
        let hat = f.a.select_cols(&first);
        assert_eq!(hat.asymmetry(), Some(0.0));
    }
}

#[test]
fn p1sym_sharp_fixture() {
    for r in 3..=5 {
        let f = p1sym_sharp(r).unwrap();
        let a = &f.a;
        let h = f.known_h.as_ref().unwrap();
        let w = f.known_w.as_ref().unwrap();
        let value = (r * r + r) as f64;
        assert!(a.asymmetry().unwrap() < 1e-12);
        assert_eq!(numerical_rank(a, &tol()), r);
        assert!(a.matmul(h).unwrap().matmul(a).unwrap().max_abs_diff(a).unwrap() < 1e-8);
        assert_eq!(h.nnz(1e-9), r * r + r);
        assert!((h.one_norm() - value).abs() < 1e-12);
        let awa = a.matmul(w).unwrap().matmul(a).unwrap();
        assert!(awa.max_norm() <= 1.0 + 1e-9, "r={r}: {}", awa.max_norm());
        assert!(rel(a.dot(w).unwrap(), value) < 1e-8);
    }
    assert!(p1sym_sharp(2).is_err());
}

#[test]
fn p1sym_sharp_lp_optimum() {
    let f = p1sym_sharp(3).unwrap();
    let model = build_p1_sym(&f.a, &tol()).unwrap();
    let sol = simplex_solve(&model, &SimplexOptions::default()).unwrap();
    assert!((sol.objective_value - 12.0).abs() < 1e-7, "{}", sol.objective_value);
    assert_eq!(sol.h.nnz(1e-6), 12);
    assert!(sol.h.max_abs_diff(f.known_h.as_ref().unwrap()).unwrap() < 1e-6);
}

#[test]
fn p123_sharp_fixture() {
    for m in 3..=6 {
        for r in 2..=3.min(m - 1) {
            let f = p123_sharp(m, r).unwrap();
            let a = &f.a;
            let h = f.known_h.as_ref().unwrap();
            assert_eq!(a.shape(), (m, r * r));
            assert_eq!(numerical_rank(a, &tol()), r);
            let proj = a.matmul(&pseudoinverse(a, &tol())).unwrap();
            let defect = h.sub(&h.matmul(&proj).unwrap()).unwrap().max_norm();
            assert!(defect < 1e-8, "m={m} r={r}: {defect}");
            assert!(a.matmul(h).unwrap().matmul(a).unwrap().max_abs_diff(a).unwrap() < 1e-8);
            assert_eq!(h.nnz(1e-9), r * r + r * r * (m - r));

            let w = f.known_w.as_ref().unwrap();
            let v = f.known_v.as_ref().unwrap();
            let at = a.transpose();
            let lhs = at.matmul(w).unwrap().matmul(&at).unwrap();
            let complement = DenseMatrix::identity(m).sub(&proj).unwrap();
            let lhs = lhs.add(&v.matmul(&complement).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(v).unwrap() < 1e-8, "m={m} r={r}");
            let d = v.sub(&h.sign()).unwrap();
            assert!(d.max_norm() < 1.0);
            assert!(rel(a.dot(w).unwrap(), h.one_norm()) < 1e-8);
        }
    }
}

#[test]
fn p123_sharp_lp_recovers_known_support() {
    let f = p123_sharp(3, 2).unwrap();
    let hhat = ah_symmetric_ginv(&f.a, &SearchConfig::default()).unwrap();
    let model = build_p123(&f.a, &hhat, &tol()).unwrap();
    let sol = simplex_solve(&model, &SimplexOptions::default()).unwrap();
    let known = f.known_h.as_ref().unwrap();
    assert_eq!(sol.h.nnz(1e-6), 8);
    assert!(sol.h.max_abs_diff(known).unwrap() < 1e-6);
    assert!((sol.objective_value - known.one_norm()).abs() < 1e-7);
}

#[test]
fn embedding_recovers_generalized_inverse() {
    let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0, -1.0], [0.5, 1.0, 3.0, 2.0], [1.5, 3.0, 3.0, 1.0]]);
    let e = sym_embedding(&a);
    let rank = numerical_rank(&e, &tol());
    assert_eq!(rank, 2 * numerical_rank(&a, &tol()));
    let s = ginv::search::init_principal(&e, &tol()).unwrap();
    let hbar = symmetric_block(&e, &s, &tol()).unwrap().h;
    let (m, n) = a.shape();
    let rows: Vec<usize> = (m..m + n).collect();
    let cols: Vec<usize> = (0..m).collect();
    let z = hbar.submatrix(&rows, &cols);
    assert!(a.matmul(&z).unwrap().matmul(&a).unwrap().max_abs_diff(&a).unwrap() < 1e-8);
    let e2 = sym_embedding(&DenseMatrix::identity(2));
    assert_eq!(numerical_rank(&e2, &tol()), 4);
}
