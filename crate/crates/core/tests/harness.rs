use ginv::harness::*;
use ginv::linalg::numerical_rank;
use ginv::ToleranceConfig;

fn strip_times(mut recs: Vec<ExperimentRecord>) -> Vec<ExperimentRecord> {
    for r in &mut recs {
        r.wall_time_s = 0.0;
    }
    recs
}

#[test]
fn generated_ranks() {
    let tol = ToleranceConfig::default();
    for seed in 0..100u64 {
        let m = 2 + (seed as usize * 7) % 11;
        let n = 2 + (seed as usize * 5) % 9;
        let r = 1 + (seed as usize) % m.min(n);
        let a = gen_instance(&GenSpec::new(m, n, r, seed)).unwrap();
        assert_eq!(numerical_rank(&a, &tol), r, "seed {seed}");
    }
}

#[test]
fn experiments_are_deterministic_and_ordered() {
    let specs = GenSpec::batch(8, 6, 3, 4, 100);
    let methods = [Method::LocalSearchAh, Method::LpP13, Method::LpP123];
    let cfg = ExperimentConfig::default();
    let a = strip_times(run_experiment(&specs, &methods, &cfg));
    let b = strip_times(run_experiment(&specs, &methods, &cfg));
    assert_eq!(a, b);
    assert_eq!(a.len(), 4 * 3 + 2 * 3);
    for (i, rec) in a.iter().take(12).enumerate() {
        assert_eq!(rec.kind, RowKind::Instance);
        assert_eq!(rec.spec.seed, 100 + (i / 3) as u64);
        assert_eq!(rec.method, methods[i % 3]);
        assert!(rec.error.is_none());
    }
    for chunk in a[..12].chunks(3) {
        let (search, p13, p123) = (&chunk[0], &chunk[1], &chunk[2]);
        assert!(search.one_norm <= search.init_one_norm + 1e-12);
        assert!(search.relative_decrease() >= 0.0);
        assert!(search.nnz <= 8.0 * 3.0);
        assert!(search.certified_ratio.unwrap() <= 3.0 * (1.0 + 1e-6));
        assert!(p123.one_norm <= search.one_norm + 1e-6);
        assert!(p13.one_norm <= p123.one_norm + 1e-6);
    }
    assert_eq!(a[12].kind, RowKind::Mean);
    assert_eq!(a[13].kind, RowKind::Std);
    let mean: f64 = a[..12].iter().step_by(3).map(|r| r.one_norm).sum::<f64>() / 4.0;
    assert!((a[12].one_norm - mean).abs() < 1e-12);
}

#[test]
fn symmetric_method_records() {
    let specs: Vec<GenSpec> = (0..3).map(|s| GenSpec::symmetric(7, 3, s)).collect();
    let recs = run_experiment(&specs, &[Method::LocalSearchSym, Method::LpP1], &ExperimentConfig::default());
    for pair in recs[..6].chunks(2) {
        assert!(pair[0].error.is_none(), "{:?}", pair[0].error);
        assert!(pair[0].nnz <= 9.0);
        assert!(pair[0].certified_ratio.unwrap() <= 9.0 * (1.0 + 1e-6));
        assert!(pair[1].one_norm <= pair[0].one_norm + 1e-6);
    }
}

#[test]
fn tables() {
    let recs = run_experiment(&GenSpec::batch(5, 4, 2, 1, 0), &[Method::LocalSearchAh], &ExperimentConfig::default());
    assert_eq!(recs.len(), 3);
    let csv = emit_table(&recs, TableFormat::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("row,m,n,r,seed,method,one_norm,nnz,swaps,init_one_norm,wall_time_s"));
    assert!(lines[2].starts_with("mean,") && lines[3].starts_with("std,"));

    let md = emit_table(&recs[..1], TableFormat::Markdown);
    assert_eq!(md.lines().count(), 3);
    let cells: Vec<&str> = md.lines().nth(2).unwrap().split('|').map(str::trim).collect();
    let norm = cells[7];
    assert_eq!(norm.split('.').nth(1).unwrap().len(), 2);

    let json = emit_table(&recs, TableFormat::Json);
    let back: Vec<ExperimentRecord> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn spec_defaults_in_json() {
    let spec: GenSpec = serde_json::from_str(r#"{"m":4,"n":3,"r":2,"seed":1}"#).unwrap();
    assert_eq!(spec.big_m, 2.0);
    assert!((spec.rho() - 0.5f64.powf(2.0 / 3.0)).abs() < 1e-15);
    assert!(!spec.symmetric);
}
