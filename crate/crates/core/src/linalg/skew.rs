use serde::{Deserialize, Serialize};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// A skew-symmetric matrix, either explicit or as `K − Kᵀ` with `K = L R`
/// of low rank. The factored form keeps `m × m` duals cheap when `m` is
/// large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SkewMatrix {
    Dense(DenseMatrix),
    Factored { left: DenseMatrix, right: DenseMatrix },
}

impl SkewMatrix {
    pub fn factored(left: DenseMatrix, right: DenseMatrix) -> Result<Self> {
        if left.cols() != right.rows() || left.rows() != right.cols() {
            return Err(Error::ShapeMismatch(format!(
                "skew factors {}x{} and {}x{} do not form a square product",
                left.rows(),
                left.cols(),
                right.rows(),
                right.cols()
            )));
        }
        Ok(SkewMatrix::Factored { left, right })
    }

    pub fn dim(&self) -> usize {
        match self {
            SkewMatrix::Dense(u) => u.rows(),
            SkewMatrix::Factored { left, .. } => left.rows(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            SkewMatrix::Dense(u) => u.clone(),
            SkewMatrix::Factored { left, right } => {
                let k = left.mul(right);
                k.sub(&k.transpose()).expect("square")
            }
        }
    }

    /// `M · U` for a conformal left factor `M`.
    pub fn left_mul(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        match self {
            SkewMatrix::Dense(u) => m.matmul(u),
            SkewMatrix::Factored { left, right } => {
                // M (L R − Rᵀ Lᵀ) = (M L) R − (M Rᵀ) Lᵀ
                let ml = m.matmul(left)?;
                let mrt = m.matmul(&right.transpose())?;
                ml.mul(right).sub(&mrt.mul(&left.transpose()))
            }
        }
    }

    /// `‖U + Uᵀ‖_max`; zero by construction for the factored form.
    pub fn skew_residual(&self) -> f64 {
        match self {
            SkewMatrix::Dense(u) => u.add(&u.transpose()).expect("square").max_norm(),
            SkewMatrix::Factored { .. } => 0.0,
        }
    }

    pub fn scale(&self, s: f64) -> SkewMatrix {
        match self {
            SkewMatrix::Dense(u) => SkewMatrix::Dense(u.scale(s)),
            SkewMatrix::Factored { left, right } => SkewMatrix::Factored {
                left: left.scale(s),
                right: right.clone(),
            },
        }
    }
}
