use ginv::blocks::{column_block, general_block, row_block, symmetric_block, GinvKind};
use ginv::families::{no_const_rank2, tight_ratio_r_plus_1, toeplitz_family, ToeplitzCase};
use ginv::harness::{gen_instance, GenSpec};
use ginv::linalg::{det, DenseMatrix};
use ginv::search::*;
use ginv::verify::check_properties;
use ginv::{IndexSet, SearchConfig, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn abs_det(a: &DenseMatrix, s: &[usize], t: &[usize]) -> f64 {
    det(&a.submatrix(s, t)).unwrap().abs()
}

fn swapped(set: &[usize], pos: usize, incoming: usize) -> Vec<usize> {
    let mut v = set.to_vec();
    v[pos] = incoming;
    v
}

/// No single column swap improves |det A[S,T]| by more than `factor`.
fn columns_locally_maximal(a: &DenseMatrix, s: &[usize], t: &[usize], factor: f64) -> bool {
    let base = abs_det(a, s, t);
    (0..t.len()).all(|p| {
        (0..a.cols())
            .filter(|j| !t.contains(j))
            .all(|j| abs_det(a, s, &swapped(t, p, j)) <= factor * base)
    })
}

fn rows_locally_maximal(a: &DenseMatrix, s: &[usize], t: &[usize], factor: f64) -> bool {
    columns_locally_maximal(&a.transpose(), t, s, factor)
}

fn principal_locally_maximal(a: &DenseMatrix, s: &[usize], factor: f64) -> bool {
    let base = abs_det(a, s, s);
    (0..s.len()).all(|p| {
        (0..a.cols()).filter(|j| !s.contains(j)).all(|j| {
            let u = swapped(s, p, j);
            abs_det(a, &u, &u) <= factor * base
        })
    })
}

const SLACK: f64 = 1.0 + 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ah_pipeline(seed in 0u64..1_000_000, m in 2usize..9, n in 2usize..9, r in 1usize..5, eps in prop_oneof![Just(0.0), 0.0f64..0.5]) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        let cfg = SearchConfig::with_epsilon(eps);
        let res = ah_symmetric_ginv(&a, &cfg).unwrap();
        prop_assert_eq!(res.kind, GinvKind::Ah);
        let rep = check_properties(&a, &res.h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.p3() && rep.reflexive, "{:?}", rep);
        prop_assert!(res.h.nnz(1e-6) <= m * r);
        prop_assert!(!res.sweep_limit_exceeded);
        let s = res.anchor_rows.clone().unwrap();
        prop_assert!(columns_locally_maximal(&a, s.indices(), res.t.indices(), cfg.threshold() * SLACK));
        // the trace is strictly improving
        for w in &res.trace {
            prop_assert!(w.ratio > cfg.threshold());
        }
    }

    #[test]
    fn ha_pipeline(seed in 0u64..1_000_000, m in 2usize..9, n in 2usize..9, r in 1usize..5) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        let res = ha_symmetric_ginv(&a, &SearchConfig::default()).unwrap();
        let rep = check_properties(&a, &res.h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.p4(), "{:?}", rep);
        prop_assert!(res.h.nnz(1e-6) <= n * r);
    }

    #[test]
    fn general_pipeline(seed in 0u64..1_000_000, m in 2usize..9, n in 2usize..9, r in 1usize..5, best in any::<bool>()) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        let cfg = SearchConfig {
            pivot_strategy: if best { PivotStrategy::BestImproving } else { PivotStrategy::FirstImproving },
            ..SearchConfig::default()
        };
        let res = general_reflexive_ginv(&a, &cfg).unwrap();
        let rep = check_properties(&a, &res.h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.reflexive);
        prop_assert!(res.h.nnz(1e-6) <= r * r);
        let f = cfg.threshold() * SLACK;
        prop_assert!(columns_locally_maximal(&a, res.s.indices(), res.t.indices(), f));
        prop_assert!(rows_locally_maximal(&a, res.s.indices(), res.t.indices(), f));
        let inv_block_norm = general_block(&a, &res.s, &res.t, &tol()).unwrap().one_norm;
        prop_assert!((inv_block_norm - res.one_norm).abs() < 1e-9 * res.one_norm.max(1.0));
    }

    #[test]
    fn symmetric_pipeline(seed in 0u64..1_000_000, n in 2usize..10, r in 1usize..5) {
        prop_assume!(r <= n);
        let a = gen_instance(&GenSpec::symmetric(n, r, seed)).unwrap();
        let res = sym_reflexive_ginv(&a, &SearchConfig::default()).unwrap();
        prop_assert_eq!(res.kind, GinvKind::Symmetric);
        let rep = check_properties(&a, &res.h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.reflexive);
        prop_assert!(res.h.asymmetry().unwrap() < 1e-12);
        prop_assert!(res.h.nnz(1e-6) <= r * r);
        prop_assert!(principal_locally_maximal(&a, res.s.indices(), MIN_IMPROVEMENT * SLACK));
    }

    #[test]
    fn onenorm_search_never_increases(seed in 0u64..1_000_000, m in 2usize..8, n in 2usize..8, r in 1usize..4) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        let (s, t) = init_general(&a, &tol()).unwrap();
        let start = general_block(&a, &s, &t, &tol()).unwrap().one_norm;
        let out = local_search_onenorm(&a, &s, &t, &SearchConfig::default()).unwrap();
        let end = general_block(&a, &out.s, &out.t, &tol()).unwrap().one_norm;
        prop_assert!(end <= start * (1.0 + 1e-12));
    }
}

#[test]
fn block_constructions_on_worked_examples() {
    let sym = DenseMatrix::from_rows(&[[5.0, 4.0, 2.0], [4.0, 5.0, -2.0], [2.0, -2.0, 8.0]]);
    let s = IndexSet::new(vec![0, 1], 3).unwrap();
    let res = symmetric_block(&sym, &s, &tol()).unwrap();
    assert!((res.one_norm - 2.0).abs() < 1e-12);

    let ah = DenseMatrix::from_rows(&[[1.0, 3.0, 8.0], [2.0, 2.0, 8.0], [3.0, 1.0, 8.0]]);
    let mut norms: Vec<f64> = [[0, 1], [0, 2], [1, 2]]
        .iter()
        .map(|t| column_block(&ah, &IndexSet::new(t.to_vec(), 3).unwrap(), &tol()).unwrap().one_norm)
        .collect();
    norms.sort_by(f64::total_cmp);
    assert!((norms[0] - 7.0 / 6.0).abs() < 1e-12);
    assert!((norms[1] - 31.0 / 24.0).abs() < 1e-12 && (norms[2] - 31.0 / 24.0).abs() < 1e-12);

    let rb = row_block(&ah.transpose(), &IndexSet::new(vec![0, 1], 3).unwrap(), &tol()).unwrap();
    assert!((rb.one_norm - 7.0 / 6.0).abs() < 1e-12);
}

#[test]
fn toeplitz_start_is_stationary() {
    // the closed-form blocks tie exactly under swaps, so the search stays put
    let cfg = SearchConfig::with_epsilon(1e-6);
    for r in 3..=5 {
        let f = toeplitz_family(r, 1e-3, 0.0, ToeplitzCase::General).unwrap();
        let top = IndexSet::range(r, r + 2);
        let out = local_search_general(&f.a, &top, &top, &cfg).unwrap();
        assert!(out.trace.is_empty(), "r={r}");
        let f = toeplitz_family(r, 1e-3, 0.0, ToeplitzCase::Ah).unwrap();
        let rows = IndexSet::range(r, r + 1);
        let cols = IndexSet::range(r, r + 2);
        let out = local_search_columns(&f.a, &rows, &cols, &cfg).unwrap();
        assert!(out.trace.is_empty(), "r={r}");
        let f = toeplitz_family(r, 1e-3, 1e-3, ToeplitzCase::Symmetric).unwrap();
        let out = local_search_principal(&f.a, &top, &cfg).unwrap();
        assert!(out.trace.is_empty(), "r={r}");
    }
}

#[test]
fn onenorm_search_stuck_on_no_constant_family() {
    for k in [10.0, 100.0] {
        let f = no_const_rank2(k).unwrap();
        let rows = IndexSet::full(2);
        let start = IndexSet::new(vec![0, 1], 4).unwrap();
        let out = local_search_onenorm(&f.a, &rows, &start, &SearchConfig::default()).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.t, start);
    }
}

#[test]
fn onenorm_search_on_tight_family_keeps_block_norm() {
    for r in 2..=4 {
        let f = tight_ratio_r_plus_1(r).unwrap();
        let rows = IndexSet::full(r);
        let cols = IndexSet::range(r, r + 1);
        let out = local_search_onenorm(&f.a, &rows, &cols, &SearchConfig::default()).unwrap();
        let res = column_block(&f.a, &out.t, &tol()).unwrap();
        assert!((res.one_norm - f.known("block_norm")).abs() < 1e-8 * f.known("block_norm"));
    }
}

#[test]
fn swap_cap_sets_flag() {
    let f = toeplitz_family(4, 1e-3, 0.0, ToeplitzCase::Ah).unwrap();
    // a poor start that needs swaps, then a cap of zero
    let a = f.a;
    let rows = IndexSet::range(4, 5);
    let cols = IndexSet::new(vec![0, 1, 2, 3], 6).unwrap();
    let cfg = SearchConfig {
        max_sweeps: Some(0),
        ..SearchConfig::default()
    };
    let out = local_search_columns(&a, &rows, &cols, &cfg).unwrap();
    assert!(out.trace.is_empty());
    let spec = GenSpec::new(12, 10, 4, 3);
    let b = gen_instance(&spec).unwrap();
    let worst = IndexSet::new(vec![6, 7, 8, 9], 10).unwrap();
    let (s0, _) = init_general(&b, &tol()).unwrap();
    let out = local_search_columns(&b, &s0, &worst, &cfg).unwrap();
    let free = local_search_columns(&b, &s0, &worst, &SearchConfig::default()).unwrap();
    assert_eq!(out.sweep_limit_exceeded, !free.trace.is_empty());
}
