use ginv::families::{tilde_a, tilde_a_inverse};
use ginv::harness::{gen_instance, GenSpec};
use ginv::linalg::{det, inverse, numerical_rank, pseudoinverse, solve, DenseMatrix};
use ginv::verify::check_properties;
use ginv::{Error, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn small_examples() {
    let a = DenseMatrix::from_rows(&[[1.0, 3.0, 8.0], [2.0, 2.0, 8.0], [3.0, 1.0, 8.0]]);
    assert_eq!(numerical_rank(&a, &tol()), 2);
    assert_eq!(numerical_rank(&DenseMatrix::identity(3), &tol()), 3);
    assert_eq!(numerical_rank(&DenseMatrix::zeros(2, 3), &tol()), 0);

    let v = DenseMatrix::from_rows(&[[3.0], [4.0]]);
    let p = pseudoinverse(&v, &tol());
    assert!(p.max_abs_diff(&DenseMatrix::from_rows(&[[3.0 / 25.0, 4.0 / 25.0]])).unwrap() < 1e-15);

    let b = DenseMatrix::from_rows(&[[5.0, 4.0], [4.0, 5.0]]);
    let x = solve(&b, &DenseMatrix::from_rows(&[[2.0], [-2.0]])).unwrap();
    assert!(x.max_abs_diff(&DenseMatrix::from_rows(&[[2.0], [-2.0]])).unwrap() < 1e-14);
    assert!((det(&b).unwrap() - 9.0).abs() < 1e-12);
    let ones = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
    assert_eq!(solve(&ones, &DenseMatrix::identity(2)), Err(Error::SingularMatrix));
    assert_eq!(inverse(&ones), Err(Error::SingularMatrix));

    let k = 7.0;
    let kk = DenseMatrix::from_rows(&[[k, k], [k, -k]]);
    assert!((inverse(&kk).unwrap().one_norm() - 2.0 / k).abs() < 1e-15);
}

#[test]
fn tilde_determinant_formula() {
    for n in 2..7 {
        for (a, b) in [(-1.0, 1.0), (3.0, 0.5), (0.2, -0.7)] {
            let nf = n as f64;
            let expected = (a + (nf - 1.0) * b) * (a - b).powi(n as i32 - 1);
            let got = det(&tilde_a(n, a, b)).unwrap();
            assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0), "n={n}");
            if expected == 0.0 {
                assert_eq!(tilde_a_inverse(n, a, b), Err(Error::SingularMatrix));
                continue;
            }
            let inv = inverse(&tilde_a(n, a, b)).unwrap();
            assert!(inv.max_abs_diff(&tilde_a_inverse(n, a, b).unwrap()).unwrap() < 1e-10);
        }
    }
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-10.0f64..10.0, rows * cols).prop_map(move |v| DenseMatrix::new(rows, cols, v).unwrap())
}

fn shaped() -> impl Strategy<Value = DenseMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(m, n)| matrix(m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pseudoinverse_satisfies_all_four(a in shaped()) {
        let h = pseudoinverse(&a, &tol());
        let rep = check_properties(&a, &h, &tol()).unwrap();
        prop_assert!(rep.p1() && rep.p2() && rep.p3() && rep.p4(), "{:?}", rep);
    }

    #[test]
    fn rank_is_transpose_invariant(a in shaped()) {
        prop_assert_eq!(numerical_rank(&a, &tol()), numerical_rank(&a.transpose(), &tol()));
    }

    #[test]
    fn det_of_inverse(seed in 0u64..10_000, n in 1usize..7) {
        // well-conditioned by construction: singular values in [0.5, 2]
        let mut spec = GenSpec::new(n, n, n, seed);
        spec.rho = Some(0.5f64.powf(1.0 / n as f64));
        let a = gen_instance(&spec).unwrap();
        let d = det(&a).unwrap() * det(&inverse(&a).unwrap()).unwrap();
        prop_assert!((d - 1.0).abs() < 1e-10);
        let i = a.matmul(&inverse(&a).unwrap()).unwrap();
        prop_assert!(i.max_abs_diff(&DenseMatrix::identity(n)).unwrap() < 1e-8);
    }

    #[test]
    fn generated_rank(seed in 0u64..1_000_000, m in 1usize..10, n in 1usize..10, r in 1usize..10) {
        prop_assume!(r <= m.min(n));
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        prop_assert_eq!(numerical_rank(&a, &tol()), r);
    }
}
