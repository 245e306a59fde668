//! Dense real linear algebra: the matrix type, rank and pseudoinverse,
//! LU-based solves, and the entrywise norms being optimized.

mod lu;
mod matrix;
mod qr;
mod skew;
mod svd;

use serde::{Deserialize, Serialize};

pub use lu::{det, inverse, solve, Lu, SINGULAR_PIVOT_RATIO};
pub use matrix::{sign, DenseMatrix};
pub use qr::{full_column_rank_pinv, independent_rows, orthonormal_columns};
pub use skew::SkewMatrix;
pub use svd::{numerical_rank, pseudoinverse, singular_values};

/// Tolerances shared by every numerical decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Singular values at or below `rank_rel_tol · σ₁` count as zero.
    pub rank_rel_tol: f64,
    /// Entries at or below this magnitude do not count toward `‖·‖₀`.
    pub nnz_tol: f64,
    /// Property residual tolerance, scaled by `1 + ‖A‖_max` where applied.
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-12,
            nnz_tol: 1e-6,
            residual_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.rank_rel_tol > 0.0 && self.nnz_tol > 0.0 && self.residual_tol > 0.0 {
            Ok(())
        } else {
            Err(crate::Error::InvalidParams(
                "all tolerances must be positive".into(),
            ))
        }
    }

    /// Residual threshold scaled to the magnitude of `a`.
    pub fn scaled_residual(&self, a: &DenseMatrix) -> f64 {
        self.residual_tol * (1.0 + a.max_norm())
    }
}

/// Entrywise 1-norm.
pub fn one_norm(h: &DenseMatrix) -> f64 {
    h.one_norm()
}

/// Entrywise max-norm.
pub fn max_norm(h: &DenseMatrix) -> f64 {
    h.max_norm()
}

/// Count of entries above `tol.nnz_tol` in magnitude.
pub fn nnz(h: &DenseMatrix, tol: &ToleranceConfig) -> usize {
    h.nnz(tol.nnz_tol)
}
