//! Moore-Penrose property checks and dual certificates that bound how far
//! a block solution can be from the 1-norm optimum.

use serde::{Deserialize, Serialize};

use crate::blocks::{block_inverse, check_symmetric, GinvResult, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{full_column_rank_pinv, numerical_rank, DenseMatrix, SkewMatrix, ToleranceConfig};
use crate::lp::dual_feasibility;

/// Max-norm residuals of the four Moore-Penrose properties:
/// `AHA = A`, `HAH = H`, `(AH)ᵀ = AH`, `(HA)ᵀ = HA`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub residual_p1: f64,
    pub residual_p2: f64,
    pub residual_p3: f64,
    pub residual_p4: f64,
    pub rank_a: usize,
    pub rank_h: usize,
    /// `AHA = A` holds and `rank(H) = rank(A)`.
    pub reflexive: bool,
    /// Threshold the residuals were judged against.
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn p1(&self) -> bool {
        self.residual_p1 <= self.tolerance
    }

    pub fn p2(&self) -> bool {
        self.residual_p2 <= self.tolerance
    }

    pub fn p3(&self) -> bool {
        self.residual_p3 <= self.tolerance
    }

    pub fn p4(&self) -> bool {
        self.residual_p4 <= self.tolerance
    }
}

/// `X · Y` skipping the rows of `Y` that are entirely zero.
fn sparse_right_mul(x: &DenseMatrix, y: &DenseMatrix) -> DenseMatrix {
    let rows = y.nonzero_rows(0.0);
    x.select_cols(&rows).mul(&y.select_rows(&rows))
}

fn symmetric_defect(x: &DenseMatrix) -> f64 {
    x.asymmetry().expect("square product")
}

pub fn check_properties(a: &DenseMatrix, h: &DenseMatrix, tol: &ToleranceConfig) -> Result<PropertyReport> {
    let (m, n) = a.shape();
    if h.shape() != (n, m) {
        return Err(Error::ShapeMismatch(format!(
            "H is {}x{}, expected {n}x{m} for a {m}x{n} A",
            h.rows(),
            h.cols()
        )));
    }
    let ah = sparse_right_mul(a, h);
    let ha = h.mul(a);
    let residual_p1 = ah.mul(a).max_abs_diff(a)?;
    let residual_p2 = h.mul(&ah).max_abs_diff(h)?;
    let rank_a = numerical_rank(a, tol);
    let rank_h = numerical_rank(h, tol);
    let tolerance = tol.scaled_residual(a);
    Ok(PropertyReport {
        residual_p1,
        residual_p2,
        residual_p3: symmetric_defect(&ah),
        residual_p4: symmetric_defect(&ha),
        rank_a,
        rank_h,
        reflexive: residual_p1 <= tolerance && rank_a == rank_h,
        tolerance,
    })
}

/// `‖Aᵀ(A(Hb) − b)‖_max`: the normal-equation residual of `x = Hb`, which
/// vanishes when `x` solves `min ‖Ax − b‖₂`.
pub fn least_squares_check(a: &DenseMatrix, h: &DenseMatrix, b: &[f64]) -> Result<f64> {
    let (m, n) = a.shape();
    if h.shape() != (n, m) || b.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "expected H {n}x{m} and b of length {m}, got H {}x{} and b of length {}",
            h.rows(),
            h.cols(),
            b.len()
        )));
    }
    let x = h.mul_vec(b)?;
    let r: Vec<f64> = a.mul_vec(&x)?.iter().zip(b).map(|(p, q)| p - q).collect();
    let g = a.transpose().mul_vec(&r)?;
    Ok(g.iter().fold(0.0, |acc, v| acc.max(v.abs())))
}

/// Dual solution `(W, U)` with its objective and scaling.
///
/// `W / feasibility_scale` (with `U / feasibility_scale`) is dual feasible,
/// so `implied_lower_bound` is at most the 1-norm of every generalized
/// inverse with the certified property set. `certified_ratio` bounds the
/// block solution's 1-norm over that optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub w: DenseMatrix,
    pub u: Option<SkewMatrix>,
    pub dual_objective: f64,
    pub feasibility_scale: f64,
    pub implied_lower_bound: f64,
    pub certified_ratio: f64,
}

fn finish(
    a: &DenseMatrix,
    w: DenseMatrix,
    u: Option<SkewMatrix>,
    primal: f64,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let (dual_objective, feasibility_scale) = dual_feasibility(a, &w, u.as_ref(), tol)?;
    let implied_lower_bound = if feasibility_scale > 0.0 {
        dual_objective / feasibility_scale
    } else {
        0.0
    };
    let certified_ratio = if dual_objective > 0.0 {
        primal * feasibility_scale / dual_objective
    } else {
        f64::INFINITY
    };
    Ok(Certificate {
        w,
        u,
        dual_objective,
        feasibility_scale,
        implied_lower_bound,
        certified_ratio,
    })
}

fn check_rank(a: &DenseMatrix, len: usize, tol: &ToleranceConfig) -> Result<()> {
    let r = numerical_rank(a, tol);
    if r != len {
        return Err(Error::WrongCardinality { expected: r, got: len });
    }
    Ok(())
}

/// Certificate for the symmetric block over `S`: with `N = A[S]⁻¹` and
/// `M = sign(N)`, `W` is zero except `W[S,S] = Nᵀ M Nᵀ`, so that
/// `⟨A,W⟩ = ‖N‖₁`.
pub fn sym_certificate(a: &DenseMatrix, s: &IndexSet, tol: &ToleranceConfig) -> Result<Certificate> {
    check_symmetric(a, tol)?;
    check_rank(a, s.len(), tol)?;
    let idx = s.indices();
    let inv = block_inverse(&a.submatrix(idx, idx))?;
    let inv_t = inv.transpose();
    let block = inv_t.mul(&inv.sign()).mul(&inv_t);
    let mut w = DenseMatrix::zeros(a.rows(), a.cols());
    w.scatter(idx, idx, &block);
    finish(a, w, None, inv.one_norm(), tol)
}

/// Certificate for the column block over `T`, anchored at the nonsingular
/// `Ã = A[S,T]`. With `Â = A[:,T]`, `E = sign(Â⁺)` and the selector `D`
/// (`D[k, S_k] = 1`): `W[S,T] = Ã⁻ᵀ E (Â⁺)ᵀ` and `U = K − Kᵀ` where
/// `K = ÂWᵀ[S,T] D + Dᵀ Ã⁻ᵀ E`. `U` is kept in factored form.
pub fn ah_certificate(a: &DenseMatrix, s: &IndexSet, t: &IndexSet, tol: &ToleranceConfig) -> Result<Certificate> {
    let (m, n) = a.shape();
    if s.universe() != m || t.universe() != n || s.len() != t.len() {
        return Err(Error::InvalidIndexSet(
            "S and T must be equal-sized subsets of the rows and columns".into(),
        ));
    }
    let r = s.len();
    let hat = a.select_cols(t.indices());
    let pinv = full_column_rank_pinv(&hat, tol)?;
    let tilde_inv = block_inverse(&a.submatrix(s.indices(), t.indices()))?;
    let e = pinv.sign();
    let tilde_inv_t_e = tilde_inv.transpose().mul(&e);
    let w_hat = tilde_inv_t_e.mul(&pinv.transpose());
    let mut w = DenseMatrix::zeros(m, n);
    w.scatter(s.indices(), t.indices(), &w_hat);

    let mut d = DenseMatrix::zeros(r, m);
    for (k, &i) in s.indices().iter().enumerate() {
        d.set(k, i, 1.0);
    }
    let left = hat.mul(&w_hat.transpose()).hstack(&d.transpose())?;
    let right = d.vstack(&tilde_inv_t_e)?;
    let u = SkewMatrix::factored(left, right)?;
    finish(a, w, Some(u), pinv.one_norm(), tol)
}

/// `‖ÂᵀWAᵀ + ÂᵀU − E‖_max` for an ah certificate over columns `T`.
pub fn ah_identity_residual(
    a: &DenseMatrix,
    t: &IndexSet,
    cert: &Certificate,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let hat = a.select_cols(t.indices());
    let e = full_column_rank_pinv(&hat, tol)?.sign();
    let hat_t = hat.transpose();
    let rows = cert.w.nonzero_rows(0.0);
    let mut lhs = hat_t
        .select_cols(&rows)
        .mul(&cert.w.select_rows(&rows))
        .mul(&a.transpose());
    if let Some(u) = &cert.u {
        lhs = lhs.add(&u.left_mul(&hat_t)?)?;
    }
    lhs.max_abs_diff(&e)
}

/// `‖H‖₁ · scale / ⟨A,W⟩`: an a-posteriori bound on `‖H‖₁ / opt`.
pub fn certified_ratio(a: &DenseMatrix, result: &GinvResult, cert: &Certificate) -> Result<f64> {
    if cert.w.shape() != a.shape() {
        return Err(Error::ShapeMismatch("certificate does not match A".into()));
    }
    if !(cert.dual_objective > 0.0) {
        return Err(Error::DegenerateCertificate(cert.dual_objective));
    }
    Ok(result.one_norm * cert.feasibility_scale / cert.dual_objective)
}
