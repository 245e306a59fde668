//! LU factorization with partial pivoting.

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Pivots below this fraction of the input's max-norm declare singularity.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-14;

/// `P A = L U` with unit-lower `L` and upper `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    packed: DenseMatrix,
    perm: Vec<usize>,
    parity: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let threshold = SINGULAR_PIVOT_RATIO * a.max_norm();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        let mut singular = a.max_norm() == 0.0 && n > 0;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= threshold {
                singular = true;
                if pmax == 0.0 {
                    continue;
                }
            }
            if p != k {
                perm.swap(p, k);
                parity = -parity;
                for j in 0..n {
                    let t = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, t);
                }
            }
            let pivot = lu.get(k, k);
            for i in (k + 1)..n {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                if factor == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Ok(Lu {
            packed: lu,
            perm,
            parity,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> f64 {
        let n = self.packed.rows();
        (0..n).fold(self.parity, |d, k| d * self.packed.get(k, k))
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.packed.rows();
        if b.rows() != n {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has {} rows, expected {n}",
                b.rows()
            )));
        }
        if self.singular {
            return Err(Error::SingularMatrix);
        }
        let k = b.cols();
        let mut x = b.select_rows(&self.perm);
        // forward substitution with unit L
        for i in 0..n {
            for p in 0..i {
                let l = self.packed.get(i, p);
                if l == 0.0 {
                    continue;
                }
                for j in 0..k {
                    let v = x.get(i, j) - l * x.get(p, j);
                    x.set(i, j, v);
                }
            }
        }
        for i in (0..n).rev() {
            for p in (i + 1)..n {
                let u = self.packed.get(i, p);
                if u == 0.0 {
                    continue;
                }
                for j in 0..k {
                    let v = x.get(i, j) - u * x.get(p, j);
                    x.set(i, j, v);
                }
            }
            let d = self.packed.get(i, i);
            for j in 0..k {
                x.set(i, j, x.get(i, j) / d);
            }
        }
        Ok(x)
    }

    /// Solves `Aᵀ X = B`.
    pub fn solve_transpose(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.packed.rows();
        if b.rows() != n {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has {} rows, expected {n}",
                b.rows()
            )));
        }
        if self.singular {
            return Err(Error::SingularMatrix);
        }
        let k = b.cols();
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = b, Lᵀ w = z, x = Pᵀ w.
        let mut z = b.clone();
        for i in 0..n {
            for p in 0..i {
                let u = self.packed.get(p, i);
                if u == 0.0 {
                    continue;
                }
                for j in 0..k {
                    let v = z.get(i, j) - u * z.get(p, j);
                    z.set(i, j, v);
                }
            }
            let d = self.packed.get(i, i);
            for j in 0..k {
                z.set(i, j, z.get(i, j) / d);
            }
        }
        for i in (0..n).rev() {
            for p in (i + 1)..n {
                let l = self.packed.get(p, i);
                if l == 0.0 {
                    continue;
                }
                for j in 0..k {
                    let v = z.get(i, j) - l * z.get(p, j);
                    z.set(i, j, v);
                }
            }
        }
        let mut x = DenseMatrix::zeros(n, k);
        for (i, &pi) in self.perm.iter().enumerate() {
            x.row_mut(pi).copy_from_slice(z.row(i));
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.packed.rows()))
    }
}

/// Determinant via partial-pivoting LU.
pub fn det(a: &DenseMatrix) -> Result<f64> {
    Ok(Lu::factor(a)?.det())
}

/// Inverse via partial-pivoting LU; `SingularMatrix` when a pivot falls
/// below `1e-14 · ‖A‖_max`.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::factor(a)?.inverse()
}

/// Solves `A X = B` for square nonsingular `A`.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    Lu::factor(a)?.solve(b)
}
