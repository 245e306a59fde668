//! QR-based routines: thin pseudoinverse of full-column-rank blocks,
//! orthonormalization, and rank-revealing row selection.

use rayon::prelude::*;

use super::svd::{from_na, rank_from_singular_values, to_na};
use super::{DenseMatrix, ToleranceConfig};
use crate::error::{Error, Result};

/// `Â⁺ = R⁻¹ Qᵀ` for an `m × r` block of full column rank.
///
/// Rank is judged from the singular values of `R` against `rank_rel_tol`.
pub fn full_column_rank_pinv(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    let (m, r) = a.shape();
    if r == 0 {
        return Ok(DenseMatrix::zeros(0, m));
    }
    if r > m {
        return Err(Error::RankDeficientBlock);
    }
    let qr = to_na(a).qr();
    let rmat = qr.r();
    let mut sv: Vec<f64> = rmat.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    if rank_from_singular_values(&sv, tol.rank_rel_tol) < r {
        return Err(Error::RankDeficientBlock);
    }
    let qt = qr.q().transpose();
    let h = rmat
        .solve_upper_triangular(&qt)
        .ok_or(Error::RankDeficientBlock)?;
    Ok(from_na(&h))
}

/// Orthonormal basis of the column space of a full-column-rank `a` (thin `Q`).
pub fn orthonormal_columns(a: &DenseMatrix) -> DenseMatrix {
    from_na(&to_na(a).qr().q())
}

/// Selects `count` linearly independent rows of `e` by Householder QR with
/// column pivoting applied to `eᵀ`.
///
/// Returns the selected row indices in ascending order together with the
/// largest residual row norm left after selection, relative to the largest
/// initial row norm (zero when the remaining rows are exactly dependent).
pub fn independent_rows(e: &DenseMatrix, count: usize) -> Result<(Vec<usize>, f64)> {
    let (p, n) = e.shape();
    if count > p.min(n) {
        return Err(Error::NumericalBreakdown(format!(
            "cannot select {count} independent rows from a {p}x{n} system"
        )));
    }
    let mut work: Vec<Vec<f64>> = (0..p).map(|i| e.row(i).to_vec()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    let mut norms: Vec<f64> = work.iter().map(|w| w.iter().map(|v| v * v).sum()).collect();
    let mut exact: Vec<f64> = norms.clone();
    let initial_max = norms.iter().copied().fold(0.0, f64::max).sqrt();
    if initial_max == 0.0 {
        return if count == 0 {
            Ok((Vec::new(), 0.0))
        } else {
            Err(Error::NumericalBreakdown("constraint matrix is zero".into()))
        };
    }

    for t in 0..count {
        let (piv, _) = (t..p)
            .map(|i| (i, norms[i]))
            .fold((t, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        work.swap(t, piv);
        order.swap(t, piv);
        norms.swap(t, piv);
        exact.swap(t, piv);

        let x = &work[t][t..];
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha <= 1e-13 * initial_max {
            return Err(Error::NumericalBreakdown(format!(
                "constraint rank {t} below expected {count}"
            )));
        }
        let mut v = x.to_vec();
        let beta = if v[0] >= 0.0 { -alpha } else { alpha };
        v[0] -= beta;
        let vnorm2: f64 = v.iter().map(|a| a * a).sum();
        work[t][t] = beta;
        for val in work[t][t + 1..].iter_mut() {
            *val = 0.0;
        }

        let (_, rest) = work.split_at_mut(t + 1);
        rest.par_iter_mut()
            .zip(norms[t + 1..].par_iter_mut().zip(exact[t + 1..].par_iter_mut()))
            .for_each(|(w, (nrm, ex))| {
                let tail = &mut w[t..];
                let dot: f64 = tail.iter().zip(&v).map(|(a, b)| a * b).sum();
                if dot != 0.0 {
                    let s = 2.0 * dot / vnorm2;
                    for (a, b) in tail.iter_mut().zip(&v) {
                        *a -= s * b;
                    }
                }
                let lead = tail[0];
                *nrm -= lead * lead;
                // recompute when downdating has lost accuracy
                if *nrm <= 1e-8 * *ex {
                    *nrm = tail[1..].iter().map(|a| a * a).sum();
                    *ex = *nrm;
                }
            });
    }
    let residual = if count < p {
        work[count..]
            .iter()
            .map(|w| w[count.min(n)..].iter().map(|a| a * a).sum::<f64>())
            .fold(0.0, f64::max)
            .sqrt()
            / initial_max
    } else {
        0.0
    };
    let mut picked = order[..count].to_vec();
    picked.sort_unstable();
    Ok((picked, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_pinv_matches_normal_equations() {
        let tol = ToleranceConfig::default();
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]]);
        let h = full_column_rank_pinv(&a, &tol).unwrap();
        let ata = a.transpose().mul(&a);
        let oracle = crate::linalg::inverse(&ata).unwrap().mul(&a.transpose());
        assert!(h.max_abs_diff(&oracle).unwrap() < 1e-12);
    }

    #[test]
    fn rank_deficient_block_detected() {
        let tol = ToleranceConfig::default();
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]);
        assert_eq!(full_column_rank_pinv(&a, &tol), Err(Error::RankDeficientBlock));
    }

    #[test]
    fn selects_independent_rows() {
        // rows 0 and 2 span everything; row 1 = 2·row 0, row 3 = row 0 + row 2
        let e = DenseMatrix::from_rows(&[
            [1.0, 0.0, 1.0],
            [2.0, 0.0, 2.0],
            [0.0, 1.0, 1.0],
            [1.0, 1.0, 2.0],
        ]);
        let (rows, resid) = independent_rows(&e, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(resid < 1e-14);
        let sub = e.select_rows(&rows);
        let tol = ToleranceConfig::default();
        assert_eq!(crate::linalg::numerical_rank(&sub, &tol), 2);
        assert!(independent_rows(&e, 3).is_err());
    }
}
