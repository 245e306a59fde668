//! Local search that directly minimizes `‖A[S,T]⁻¹‖₁` over single swaps.
//!
//! Neighbor inverses come from Sherman-Morrison updates of the current
//! inverse `N`. Replacing block column `i` by `a = A[S,j]` gives
//! `N − (c − eᵢ)(eᵢᵀN)/cᵢ` with `c = N a`; replacing block row `i` by
//! `a = A[j,T]` gives `N − N eᵢ (g − eᵢᵀ)/gᵢ` with `g = a N`.

use super::det::{apply_swap, choose};
use super::{PivotStrategy, SearchConfig, SearchOutcome};
use crate::blocks::{block_inverse, IndexSet, SwapRecord, SwapSide};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Relative decrease a swap must achieve to be accepted.
const STRICT_DECREASE: f64 = 1.0 - 1e-12;

/// Pivot magnitudes below this make the neighbor block numerically singular.
const TINY_PIVOT: f64 = 1e-12;

/// `‖N − (c − eᵢ)(eᵢᵀN)/cᵢ‖₁`, the 1-norm after a column replacement.
fn column_neighbor_norm(n: &DenseMatrix, c: &[f64], i: usize) -> Option<f64> {
    let ci = c[i];
    if ci.abs() <= TINY_PIVOT {
        return None;
    }
    let pivot_row = n.row(i);
    let mut total = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        let f = (ck - if k == i { 1.0 } else { 0.0 }) / ci;
        total += n
            .row(k)
            .iter()
            .zip(pivot_row)
            .map(|(x, p)| (x - f * p).abs())
            .sum::<f64>();
    }
    Some(total)
}

/// `‖N − N eᵢ (g − eᵢᵀ)/gᵢ‖₁`, the 1-norm after a row replacement.
fn row_neighbor_norm(n: &DenseMatrix, g: &[f64], i: usize) -> Option<f64> {
    let gi = g[i];
    if gi.abs() <= TINY_PIVOT {
        return None;
    }
    let r = n.rows();
    let mut total = 0.0;
    for k in 0..r {
        let nki = n.get(k, i) / gi;
        for (l, &gl) in g.iter().enumerate() {
            let d = gl - if l == i { 1.0 } else { 0.0 };
            total += (n.get(k, l) - nki * d).abs();
        }
    }
    Some(total)
}

fn step(
    a: &DenseMatrix,
    s: &mut IndexSet,
    t: &mut IndexSet,
    cfg: &SearchConfig,
) -> Result<Option<SwapRecord>> {
    let n = block_inverse(&a.submatrix(s.indices(), t.indices()))?;
    let current = n.one_norm();
    let r = n.rows();
    let target = current * STRICT_DECREASE;
    // improvement factors current / neighbor, so larger is better
    let improvement = |norm: Option<f64>| match norm {
        Some(v) if v < target => {
            if v > 0.0 {
                current / v
            } else {
                f64::INFINITY
            }
        }
        _ => 0.0,
    };

    let out_cols = t.complement();
    let c = n.mul(&a.submatrix(s.indices(), &out_cols));
    let col_table: Vec<Vec<f64>> = (0..out_cols.len())
        .map(|j| {
            let cj = c.column(j);
            (0..r).map(|i| improvement(column_neighbor_norm(&n, &cj, i))).collect()
        })
        .collect();
    let out_rows = s.complement();
    let g = a.submatrix(&out_rows, t.indices()).mul(&n);
    let row_table: Vec<Vec<f64>> = (0..out_rows.len())
        .map(|j| {
            let gj = g.row(j);
            (0..r).map(|i| improvement(row_neighbor_norm(&n, gj, i))).collect()
        })
        .collect();

    // anything strictly positive already passed the strict-decrease test
    let col_pick = choose(r, &out_cols, 0.0, cfg.pivot_strategy, |p, j| col_table[j][p]);
    let row_pick = match (cfg.pivot_strategy, col_pick) {
        (PivotStrategy::FirstImproving, Some(_)) => None,
        _ => choose(r, &out_rows, 0.0, cfg.pivot_strategy, |p, j| row_table[j][p]),
    };
    let take_column = match (col_pick, row_pick) {
        (Some(c), Some(r)) => c.ratio >= r.ratio,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return Ok(None),
    };
    let rec = if take_column {
        let cand = col_pick.expect("column candidate");
        SwapRecord {
            out_index: apply_swap(t, cand.position, cand.incoming),
            in_index: cand.incoming,
            side: SwapSide::Column,
            ratio: cand.ratio,
        }
    } else {
        let cand = row_pick.expect("row candidate");
        SwapRecord {
            out_index: apply_swap(s, cand.position, cand.incoming),
            in_index: cand.incoming,
            side: SwapSide::Row,
            ratio: cand.ratio,
        }
    };
    Ok(Some(rec))
}

/// Single row or column swaps that strictly decrease `‖A[S,T]⁻¹‖₁` until
/// none remains. Column swaps are scanned before row swaps.
pub fn local_search_onenorm(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &IndexSet,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    if s.universe() != a.rows() || t.universe() != a.cols() || s.len() != t.len() {
        return Err(Error::InvalidIndexSet(
            "index sets do not match the matrix dimensions".into(),
        ));
    }
    let mut s = s.sorted();
    let mut t = t.sorted();
    let cap = cfg.cap(a);
    let mut trace = Vec::new();
    loop {
        let mut ps = s.clone();
        let mut pt = t.clone();
        match step(a, &mut ps, &mut pt, cfg)? {
            None => break,
            Some(_) if trace.len() >= cap => {
                return Ok(SearchOutcome {
                    s,
                    t,
                    trace,
                    sweep_limit_exceeded: true,
                })
            }
            Some(rec) => {
                s = ps;
                t = pt;
                trace.push(rec);
            }
        }
    }
    Ok(SearchOutcome {
        s,
        t,
        trace,
        sweep_limit_exceeded: false,
    })
}
