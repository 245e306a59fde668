//! Determinant local searches over column, principal and two-sided swaps.
//!
//! Swap ratios come in batch from one factorization of the current block:
//! with `B = A[S,T]`, swapping block column `i` for column `j` of `A[S,:]`
//! scales `|det B|` by `|(B⁻¹ A[S,j])_i|`. Row swaps use `A[j,T] B⁻¹`,
//! and a principal swap scales the determinant by `x_i²` where
//! `A[S] x = A[S,j]`. The block is refactored after every accepted swap.

use super::{PivotStrategy, SearchConfig, SearchOutcome};
use crate::blocks::{check_symmetric, IndexSet, SwapRecord, SwapSide};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Lu};

/// Candidate swap: position in the current set, incoming index, ratio.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub position: usize,
    pub incoming: usize,
    pub ratio: f64,
}

/// Picks a swap from a ratio table where `ratio(p, c)` is the factor for
/// replacing the element at position `p` of `current` (sorted ascending)
/// with `outside[c]` (also ascending).
pub(crate) fn choose(
    positions: usize,
    outside: &[usize],
    threshold: f64,
    strategy: PivotStrategy,
    ratio: impl Fn(usize, usize) -> f64,
) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for p in 0..positions {
        for (c, &incoming) in outside.iter().enumerate() {
            let v = ratio(p, c);
            if !(v > threshold) {
                continue;
            }
            let cand = Candidate {
                position: p,
                incoming,
                ratio: v,
            };
            match strategy {
                PivotStrategy::FirstImproving => return Some(cand),
                PivotStrategy::BestImproving => {
                    if best.is_none_or(|b| v > b.ratio) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best
}

fn factor_block(block: &DenseMatrix) -> Result<Lu> {
    let lu = Lu::factor(block)?;
    if lu.is_singular() {
        return Err(Error::SingularBlock);
    }
    Ok(lu)
}

/// Replaces the element at `position` and restores ascending order.
pub(crate) fn apply_swap(set: &mut IndexSet, position: usize, incoming: usize) -> usize {
    let out = set.indices()[position];
    set.replace(position, incoming);
    *set = set.sorted();
    out
}

fn check_start(a: &DenseMatrix, s: &IndexSet, t: &IndexSet) -> Result<()> {
    if s.universe() != a.rows() || t.universe() != a.cols() {
        return Err(Error::InvalidIndexSet(
            "index sets do not match the matrix dimensions".into(),
        ));
    }
    if s.len() != t.len() {
        return Err(Error::WrongCardinality {
            expected: s.len(),
            got: t.len(),
        });
    }
    Ok(())
}

/// One column step with rows `s` fixed: finds and applies an improving swap.
fn column_step(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &mut IndexSet,
    cfg: &SearchConfig,
) -> Result<Option<SwapRecord>> {
    let lu = factor_block(&a.submatrix(s.indices(), t.indices()))?;
    let outside = t.complement();
    if outside.is_empty() {
        return Ok(None);
    }
    let c = lu.solve(&a.submatrix(s.indices(), &outside))?;
    let pick = choose(t.len(), &outside, cfg.threshold(), cfg.pivot_strategy, |p, j| {
        c.get(p, j).abs()
    });
    Ok(pick.map(|cand| SwapRecord {
        out_index: apply_swap(t, cand.position, cand.incoming),
        in_index: cand.incoming,
        side: SwapSide::Column,
        ratio: cand.ratio,
    }))
}

/// One row step with columns `t` fixed.
fn row_step(
    a: &DenseMatrix,
    s: &mut IndexSet,
    t: &IndexSet,
    cfg: &SearchConfig,
) -> Result<Option<SwapRecord>> {
    let lu = factor_block(&a.submatrix(s.indices(), t.indices()))?;
    let outside = s.complement();
    if outside.is_empty() {
        return Ok(None);
    }
    // rows of A[S^c,T] B⁻¹, obtained as B⁻ᵀ A[S^c,T]ᵀ
    let g = lu.solve_transpose(&a.submatrix(&outside, t.indices()).transpose())?;
    let pick = choose(s.len(), &outside, cfg.threshold(), cfg.pivot_strategy, |p, j| {
        g.get(p, j).abs()
    });
    Ok(pick.map(|cand| SwapRecord {
        out_index: apply_swap(s, cand.position, cand.incoming),
        in_index: cand.incoming,
        side: SwapSide::Row,
        ratio: cand.ratio,
    }))
}

fn principal_step(a: &DenseMatrix, s: &mut IndexSet, cfg: &SearchConfig) -> Result<Option<SwapRecord>> {
    let lu = factor_block(&a.submatrix(s.indices(), s.indices()))?;
    let outside = s.complement();
    if outside.is_empty() {
        return Ok(None);
    }
    let x = lu.solve(&a.submatrix(s.indices(), &outside))?;
    let pick = choose(s.len(), &outside, cfg.threshold(), cfg.pivot_strategy, |p, j| {
        let v = x.get(p, j);
        v * v
    });
    Ok(pick.map(|cand| SwapRecord {
        out_index: apply_swap(s, cand.position, cand.incoming),
        in_index: cand.incoming,
        side: SwapSide::Principal,
        ratio: cand.ratio,
    }))
}

/// Runs `step` until it finds nothing or the swap cap is reached.
///
/// `step(commit)` looks for an improving swap and applies it only when
/// `commit` is set; at the cap one uncommitted probe decides whether the
/// cap actually cut the search short.
fn drive(
    cap: usize,
    mut step: impl FnMut(bool) -> Result<Option<SwapRecord>>,
) -> Result<(Vec<SwapRecord>, bool)> {
    let mut trace = Vec::new();
    loop {
        if trace.len() >= cap {
            let more = step(false)?.is_some();
            return Ok((trace, more));
        }
        match step(true)? {
            Some(rec) => trace.push(rec),
            None => return Ok((trace, false)),
        }
    }
}

/// Column swaps with rows `s` held fixed until `T` is a `(1+ε)`-local
/// maximizer of `|det A[S,T]|`.
pub fn local_search_columns(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &IndexSet,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_start(a, s, t)?;
    let mut t = t.sorted();
    let (trace, limited) = drive(cfg.cap(a), |commit| {
        let mut probe = t.clone();
        let rec = column_step(a, s, &mut probe, cfg)?;
        if commit {
            t = probe;
        }
        Ok(rec)
    })?;
    Ok(SearchOutcome {
        s: s.clone(),
        t,
        trace,
        sweep_limit_exceeded: limited,
    })
}

/// Principal swaps until `S` is a `(1+ε)`-local maximizer of `|det A[S]|`.
pub fn local_search_principal(a: &DenseMatrix, s: &IndexSet, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_symmetric(a, &cfg.tol)?;
    check_start(a, s, s)?;
    let mut s = s.sorted();
    let (trace, limited) = drive(cfg.cap(a), |commit| {
        let mut probe = s.clone();
        let rec = principal_step(a, &mut probe, cfg)?;
        if commit {
            s = probe;
        }
        Ok(rec)
    })?;
    Ok(SearchOutcome {
        t: s.clone(),
        s,
        trace,
        sweep_limit_exceeded: limited,
    })
}

/// Alternating column and row swaps until neither side improves
/// `|det A[S,T]|` by more than `1+ε`.
pub fn local_search_general(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &IndexSet,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_start(a, s, t)?;
    let mut s = s.sorted();
    let mut t = t.sorted();
    let mut column_turn = true;
    let mut idle_sides = 0;
    let (trace, limited) = drive(cfg.cap(a), |commit| {
        while idle_sides < 2 {
            let mut ps = s.clone();
            let mut pt = t.clone();
            let rec = if column_turn {
                column_step(a, &s, &mut pt, cfg)?
            } else {
                row_step(a, &mut ps, &t, cfg)?
            };
            column_turn = !column_turn;
            if rec.is_some() {
                if commit {
                    s = ps;
                    t = pt;
                }
                idle_sides = 0;
                return Ok(rec);
            }
            idle_sides += 1;
        }
        Ok(None)
    })?;
    Ok(SearchOutcome {
        s,
        t,
        trace,
        sweep_limit_exceeded: limited,
    })
}
