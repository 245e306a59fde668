//! Starting index sets for the local searches.

use crate::blocks::{check_symmetric, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, DenseMatrix, ToleranceConfig};

/// Rows `S` and columns `T` with `|S| = |T| = rank(A)` and `A[S,T]`
/// nonsingular, from Gaussian elimination with complete pivoting.
/// Both sets are returned in ascending order.
pub fn init_general(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<(IndexSet, IndexSet)> {
    if a.is_empty() || a.max_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let r = numerical_rank(a, tol);
    init_general_with_rank(a, r)
}

pub(crate) fn init_general_with_rank(a: &DenseMatrix, r: usize) -> Result<(IndexSet, IndexSet)> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut rows: Vec<usize> = (0..m).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..r {
        let mut best = (k, k, -1.0);
        for i in k..m {
            let row = w.row(i);
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.abs() > best.2 {
                    best = (i, j, v.abs());
                }
            }
        }
        let (pi, pj, pmax) = best;
        if pmax <= 0.0 {
            return Err(Error::NumericalBreakdown(format!(
                "elimination ran out of pivots after {k} of {r} steps"
            )));
        }
        if pi != k {
            rows.swap(pi, k);
            for j in 0..n {
                let t = w.get(k, j);
                w.set(k, j, w.get(pi, j));
                w.set(pi, j, t);
            }
        }
        if pj != k {
            cols.swap(pj, k);
            for i in 0..m {
                let t = w.get(i, k);
                w.set(i, k, w.get(i, pj));
                w.set(i, pj, t);
            }
        }
        let pivot_row: Vec<f64> = w.row(k)[k..].to_vec();
        let pivot = pivot_row[0];
        for i in (k + 1)..m {
            let f = w.get(i, k) / pivot;
            if f == 0.0 {
                continue;
            }
            let row = &mut w.row_mut(i)[k..];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
        }
    }
    let mut s = rows[..r].to_vec();
    let mut t = cols[..r].to_vec();
    s.sort_unstable();
    t.sort_unstable();
    Ok((IndexSet::new(s, m)?, IndexSet::new(t, n)?))
}

/// `S` with `|S| = rank(A)` and `A[S]` nonsingular, for symmetric `A`.
///
/// Symmetric elimination on the Schur complement: a 1×1 pivot when the
/// largest remaining diagonal entry is within the Bunch-Kaufman factor of
/// the largest remaining entry, otherwise a 2×2 pivot on the largest
/// off-diagonal entry.
pub fn init_principal(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<IndexSet> {
    check_symmetric(a, tol)?;
    if a.is_empty() || a.max_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let r = numerical_rank(a, tol);
    let n = a.rows();
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut w = a.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(r);

    while chosen.len() < r {
        let (mut di, mut dmax) = (remaining[0], -1.0);
        let (mut oi, mut oj, mut omax) = (remaining[0], remaining[0], -1.0);
        for (x, &i) in remaining.iter().enumerate() {
            let d = w.get(i, i).abs();
            if d > dmax {
                di = i;
                dmax = d;
            }
            for &j in &remaining[x + 1..] {
                let v = w.get(i, j).abs();
                if v > omax {
                    oi = i;
                    oj = j;
                    omax = v;
                }
            }
        }
        let one_by_one = dmax >= alpha * omax || chosen.len() + 1 == r;
        let pivots: Vec<usize> = if one_by_one { vec![di] } else { vec![oi, oj] };
        if pivots.iter().all(|&p| w.get(p, p) == 0.0) && one_by_one && dmax <= 0.0 {
            return Err(Error::NumericalBreakdown(
                "symmetric elimination found no usable pivot".into(),
            ));
        }
        remaining.retain(|i| !pivots.contains(i));
        // Schur complement on the remaining indices
        let piv = w.submatrix(&pivots, &pivots);
        let pinv = crate::blocks::block_inverse(&piv)
            .map_err(|_| Error::NumericalBreakdown("singular symmetric pivot".into()))?;
        let coupling = w.submatrix(&remaining, &pivots);
        let update = coupling.mul(&pinv).mul(&coupling.transpose());
        for (x, &i) in remaining.iter().enumerate() {
            for (y, &j) in remaining.iter().enumerate() {
                let v = w.get(i, j) - update.get(x, y);
                w.set(i, j, v);
            }
        }
        chosen.extend(pivots);
    }
    chosen.sort_unstable();
    IndexSet::new(chosen, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det;

    #[test]
    fn identity_starts() {
        let tol = ToleranceConfig::default();
        let (s, t) = init_general(&DenseMatrix::identity(3), &tol).unwrap();
        assert_eq!(s.indices(), &[0, 1, 2]);
        assert_eq!(t.indices(), &[0, 1, 2]);
        assert_eq!(init_principal(&DenseMatrix::identity(4), &tol).unwrap().indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn zero_matrix_rejected() {
        let tol = ToleranceConfig::default();
        assert_eq!(init_general(&DenseMatrix::zeros(2, 3), &tol).unwrap_err(), Error::ZeroMatrix);
        assert_eq!(init_principal(&DenseMatrix::zeros(2, 2), &tol).unwrap_err(), Error::ZeroMatrix);
    }

    #[test]
    fn rank_two_example_block_is_nonsingular() {
        let tol = ToleranceConfig::default();
        let a = DenseMatrix::from_rows(&[[1.0, 3.0, 8.0], [2.0, 2.0, 8.0], [3.0, 1.0, 8.0]]);
        let (s, t) = init_general(&a, &tol).unwrap();
        assert_eq!(s.len(), 2);
        assert!(det(&a.submatrix(s.indices(), t.indices())).unwrap().abs() > 1e-8);
    }

    #[test]
    fn two_by_two_pivot_needed() {
        let tol = ToleranceConfig::default();
        let a = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(init_principal(&a, &tol).unwrap().indices(), &[0, 1]);
        // rank 2 with zero diagonal in a 3x3 embedding
        let b = DenseMatrix::from_rows(&[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_eq!(init_principal(&b, &tol).unwrap().indices(), &[0, 1]);
    }

    #[test]
    fn symmetric_example_principal_block() {
        let tol = ToleranceConfig::default();
        let a = DenseMatrix::from_rows(&[[5.0, 4.0, 2.0], [4.0, 5.0, -2.0], [2.0, -2.0, 8.0]]);
        let s = init_principal(&a, &tol).unwrap();
        assert_eq!(s.len(), 2);
        assert!(det(&a.submatrix(s.indices(), s.indices())).unwrap().abs() > 1.0);
    }
}
