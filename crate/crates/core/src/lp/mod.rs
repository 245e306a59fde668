//! 1-norm minimizing LPs over generalized inverses, solved to vertices,
//! and evaluation of dual solutions.

mod export;
mod model;
mod simplex;

pub use export::export_lp;
pub use model::{build_p1, build_p123, build_p13, build_p1_sym, vertex_nnz_bound, LpKind, LpModel};
pub use simplex::{simplex_solve, LpSolution, SimplexOptions};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SkewMatrix, ToleranceConfig};

/// `(⟨A,W⟩, ‖AᵀWAᵀ + AᵀU‖_max)` for a candidate dual `W` (`m × n`) and
/// optional skew `U` (`m × m`).
///
/// Dividing `(W, U)` by the second value gives a dual-feasible point, so
/// the ratio of the two lower-bounds every primal optimum. Only the
/// nonzero rows and columns of `W` enter the products.
pub fn dual_feasibility(
    a: &DenseMatrix,
    w: &DenseMatrix,
    u: Option<&SkewMatrix>,
    tol: &ToleranceConfig,
) -> Result<(f64, f64)> {
    let (m, n) = a.shape();
    if w.shape() != (m, n) {
        return Err(Error::ShapeMismatch(format!(
            "dual W is {}x{}, expected {m}x{n}",
            w.rows(),
            w.cols()
        )));
    }
    let objective = a.dot(w)?;
    let rows = w.nonzero_rows(0.0);
    let cols = w.nonzero_cols(0.0);
    // AᵀWAᵀ = A[R,:]ᵀ · W[R,C] · A[:,C]ᵀ
    let mut total = if rows.is_empty() {
        DenseMatrix::zeros(n, m)
    } else {
        let right = w.submatrix(&rows, &cols).mul(&a.select_cols(&cols).transpose());
        a.select_rows(&rows).transpose().mul(&right)
    };
    if let Some(u) = u {
        if u.dim() != m {
            return Err(Error::ShapeMismatch(format!("skew U has dimension {}, expected {m}", u.dim())));
        }
        let skew = u.skew_residual();
        if skew > tol.residual_tol * (1.0 + a.max_norm()) {
            return Err(Error::NotSkew(skew));
        }
        total = total.add(&u.left_mul(&a.transpose())?)?;
    }
    Ok((objective, total.max_norm()))
}
