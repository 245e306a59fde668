//! Local searches for well-conditioned blocks and the end-to-end
//! pipelines that turn them into sparse reflexive generalized inverses.

mod det;
mod init;
mod onenorm;

use serde::{Deserialize, Serialize};

pub use crate::blocks::{SwapRecord, SwapSide};
pub use det::{local_search_columns, local_search_general, local_search_principal};
pub use init::{init_general, init_principal};
pub use onenorm::local_search_onenorm;

use crate::blocks::{
    check_symmetric, column_block_unchecked, general_block_unchecked, symmetric_block, transpose_result,
    GinvKind, GinvResult, IndexSet,
};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, ToleranceConfig};

/// Smallest improvement factor a swap needs, even with `epsilon = 0`.
pub const MIN_IMPROVEMENT: f64 = 1.0 + 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotStrategy {
    /// Take the first improving swap, scanning outgoing positions in
    /// ascending index order and then incoming indices ascending.
    #[default]
    FirstImproving,
    /// Take the largest improvement; ties go to the earliest in scan order.
    BestImproving,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub epsilon: f64,
    /// Cap on accepted swaps; `None` means ten times the column count.
    pub max_sweeps: Option<usize>,
    pub pivot_strategy: PivotStrategy,
    pub tol: ToleranceConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            epsilon: 0.0,
            max_sweeps: None,
            pivot_strategy: PivotStrategy::FirstImproving,
            tol: ToleranceConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        SearchConfig {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParams(format!(
                "epsilon must be a finite nonnegative number, got {}",
                self.epsilon
            )));
        }
        self.tol.validate()
    }

    /// Ratio a swap must exceed to be accepted.
    pub fn threshold(&self) -> f64 {
        (1.0 + self.epsilon).max(MIN_IMPROVEMENT)
    }

    pub(crate) fn cap(&self, a: &DenseMatrix) -> usize {
        self.max_sweeps.unwrap_or(10 * a.cols().max(1))
    }
}

/// Final index sets of a search, the accepted swaps in order, and whether
/// the swap cap stopped the search early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub s: IndexSet,
    pub t: IndexSet,
    pub trace: Vec<SwapRecord>,
    pub sweep_limit_exceeded: bool,
}

fn attach(mut res: GinvResult, outcome: SearchOutcome) -> GinvResult {
    res.trace = outcome.trace;
    res.sweep_limit_exceeded = outcome.sweep_limit_exceeded;
    res
}

/// Symmetric reflexive generalized inverse from a principal block that is
/// a `(1+ε)`-local maximizer of the absolute determinant.
pub fn sym_reflexive_ginv(a: &DenseMatrix, cfg: &SearchConfig) -> Result<GinvResult> {
    cfg.validate()?;
    check_symmetric(a, &cfg.tol)?;
    let s0 = init_principal(a, &cfg.tol)?;
    let outcome = local_search_principal(a, &s0, cfg)?;
    let res = symmetric_block(a, &outcome.s, &cfg.tol)?;
    Ok(attach(res, outcome))
}

/// ah-symmetric reflexive generalized inverse: rows `S` from the initial
/// elimination stay fixed while columns `T` climb to a `(1+ε)`-local
/// maximizer of `|det A[S,T]|`; the column block over `T` is returned.
pub fn ah_symmetric_ginv(a: &DenseMatrix, cfg: &SearchConfig) -> Result<GinvResult> {
    cfg.validate()?;
    let (s0, t0) = init_general(a, &cfg.tol)?;
    let outcome = local_search_columns(a, &s0, &t0, cfg)?;
    let mut res = column_block_unchecked(a, &outcome.t, &cfg.tol)?;
    res.anchor_rows = Some(outcome.s.clone());
    Ok(attach(res, outcome))
}

/// ha-symmetric reflexive generalized inverse, via the ah construction on
/// `Aᵀ`.
pub fn ha_symmetric_ginv(a: &DenseMatrix, cfg: &SearchConfig) -> Result<GinvResult> {
    let inner = ah_symmetric_ginv(&a.transpose(), cfg)?;
    Ok(transpose_result(inner, GinvKind::Ha))
}

/// Reflexive generalized inverse from a two-sided `(1+ε)`-local maximizer.
pub fn general_reflexive_ginv(a: &DenseMatrix, cfg: &SearchConfig) -> Result<GinvResult> {
    cfg.validate()?;
    let (s0, t0) = init_general(a, &cfg.tol)?;
    let outcome = local_search_general(a, &s0, &t0, cfg)?;
    let res = general_block_unchecked(a, &outcome.s, &outcome.t, &cfg.tol)?;
    Ok(attach(res, outcome))
}
