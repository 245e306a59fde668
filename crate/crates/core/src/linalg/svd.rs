//! Singular-value based rank and pseudoinverse, backed by nalgebra.

use nalgebra::DMatrix;

use super::{DenseMatrix, ToleranceConfig};

pub(crate) fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.entries())
}

pub(crate) fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let (m, n) = a.shape();
    // Very elongated inputs are first compressed to their triangular factor;
    // singular values are unchanged.
    let core = if m > 2 * n {
        to_na(a).qr().r()
    } else if n > 2 * m {
        to_na(&a.transpose()).qr().r()
    } else {
        to_na(a)
    };
    let mut sv: Vec<f64> = core.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Number of singular values above `rank_rel_tol · σ₁`; zero for the zero
/// matrix.
pub fn numerical_rank(a: &DenseMatrix, tol: &ToleranceConfig) -> usize {
    rank_from_singular_values(&singular_values(a), tol.rank_rel_tol)
}

pub(crate) fn rank_from_singular_values(sv: &[f64], rel_tol: f64) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().filter(|&&s| s > rel_tol * s1).count(),
        _ => 0,
    }
}

/// Moore-Penrose pseudoinverse `V Σ⁺ Uᵀ`, truncating singular values at the
/// rank cutoff.
pub fn pseudoinverse(a: &DenseMatrix, tol: &ToleranceConfig) -> DenseMatrix {
    if a.is_empty() {
        return DenseMatrix::zeros(a.cols(), a.rows());
    }
    let svd = to_na(a).svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let s1 = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = tol.rank_rel_tol * s1;
    let (m, n) = a.shape();
    let mut out = DenseMatrix::zeros(n, m);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let v = vt[(k, i)] * inv;
            if v == 0.0 {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += v * u[(j, k)];
            }
        }
    }
    out
}
