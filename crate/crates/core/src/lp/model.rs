//! Equality-form LPs whose feasible sets are the generalized inverses with
//! a given property set, and whose objective is the entrywise 1-norm.

use serde::{Deserialize, Serialize};

use crate::blocks::{check_symmetric, GinvResult};
use crate::error::{Error, Result};
use crate::linalg::{independent_rows, numerical_rank, pseudoinverse, DenseMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpKind {
    /// `AHA = A`.
    P1,
    /// `AHA = A` over symmetric `H`, parametrized by its lower triangle.
    P1Sym,
    /// `AH = AA⁺`, equivalent to `AHA = A` with `AH` symmetric.
    P13,
    /// `AH = AA⁺` and `H·AĤ = H` for a linearizing ah-symmetric `Ĥ`.
    P123,
}

impl LpKind {
    pub fn name(self) -> &'static str {
        match self {
            LpKind::P1 => "p1",
            LpKind::P1Sym => "p1sym",
            LpKind::P13 => "p13",
            LpKind::P123 => "p123",
        }
    }
}

/// `min Σ objective_v |h_v|` subject to `eq_matrix · h = eq_rhs`.
///
/// The solver splits `h = h⁺ − h⁻` with both parts nonnegative, so the
/// objective is linear in the split variables. Variable `v` is the entry
/// `var_map[v]` of the `n × m` matrix `H` (and its mirror for `P1Sym`).
/// Rows that are linear combinations of others have already been removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    pub kind: LpKind,
    pub objective: Vec<f64>,
    pub eq_matrix: DenseMatrix,
    pub eq_rhs: Vec<f64>,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub var_map: Vec<(usize, usize)>,
    /// Largest relative row residual discarded by the row reduction.
    pub dropped_residual: f64,
}

impl LpModel {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    /// Assembles the `n × m` matrix `H` from variable values.
    pub fn assemble(&self, h: &[f64]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n, self.m);
        for (&(i, j), &v) in self.var_map.iter().zip(h) {
            out.set(i, j, v);
            if self.kind == LpKind::P1Sym {
                out.set(j, i, v);
            }
        }
        out
    }

    /// Reads the variable values off a full `n × m` matrix.
    pub fn variables_of(&self, h: &DenseMatrix) -> Vec<f64> {
        self.var_map.iter().map(|&(i, j)| h.get(i, j)).collect()
    }

    /// `max_i |(E h − b)_i|` over the kept rows.
    pub fn residual(&self, h: &[f64]) -> f64 {
        let eh = self.eq_matrix.mul_vec(h).expect("conformal");
        eh.iter()
            .zip(&self.eq_rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn nonzero(a: &DenseMatrix) -> Result<()> {
    if a.is_empty() || a.max_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(())
}

fn full_var_map(n: usize, m: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect()
}

/// Keeps `rank` independent rows of `(rows, rhs)`.
fn reduce(
    kind: LpKind,
    rows: DenseMatrix,
    rhs: Vec<f64>,
    rank: usize,
    objective: Vec<f64>,
    var_map: Vec<(usize, usize)>,
    shape: (usize, usize, usize),
) -> Result<LpModel> {
    let (keep, dropped_residual) = independent_rows(&rows, rank)?;
    let eq_matrix = rows.select_rows(&keep);
    let eq_rhs = keep.iter().map(|&i| rhs[i]).collect();
    let (m, n, r) = shape;
    Ok(LpModel {
        kind,
        objective,
        eq_matrix,
        eq_rhs,
        m,
        n,
        r,
        var_map,
        dropped_residual,
    })
}

/// 1-norm minimization over all generalized inverses of `A`.
pub fn build_p1(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<LpModel> {
    nonzero(a)?;
    let (m, n) = a.shape();
    let r = numerical_rank(a, tol);
    let var_map = full_var_map(n, m);
    // (AHA)_{kl} = Σ_{ij} A_ki H_ij A_jl
    let mut rows = DenseMatrix::zeros(m * n, n * m);
    let mut rhs = Vec::with_capacity(m * n);
    for k in 0..m {
        for l in 0..n {
            let row = rows.row_mut(k * n + l);
            for (v, &(i, j)) in var_map.iter().enumerate() {
                row[v] = a.get(k, i) * a.get(j, l);
            }
            rhs.push(a.get(k, l));
        }
    }
    let objective = vec![1.0; n * m];
    reduce(LpKind::P1, rows, rhs, r * r, objective, var_map, (m, n, r))
}

/// 1-norm minimization over symmetric generalized inverses of symmetric
/// `A`. Off-diagonal variables stand for two entries and weigh 2.
pub fn build_p1_sym(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<LpModel> {
    check_symmetric(a, tol)?;
    nonzero(a)?;
    let n = a.rows();
    let r = numerical_rank(a, tol);
    let var_map: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let p = var_map.len();
    let mut rows = DenseMatrix::zeros(p, p);
    let mut rhs = Vec::with_capacity(p);
    for (c, &(k, l)) in var_map.iter().enumerate() {
        let row = rows.row_mut(c);
        for (v, &(i, j)) in var_map.iter().enumerate() {
            row[v] = if i == j {
                a.get(k, i) * a.get(i, l)
            } else {
                a.get(k, i) * a.get(j, l) + a.get(k, j) * a.get(i, l)
            };
        }
        rhs.push(a.get(k, l));
    }
    let objective = var_map
        .iter()
        .map(|&(i, j)| if i == j { 1.0 } else { 2.0 })
        .collect();
    reduce(LpKind::P1Sym, rows, rhs, r * (r + 1) / 2, objective, var_map, (n, n, r))
}

/// Rows of `AH = P` for a given `m × m` right-hand side `P`.
fn ah_rows(a: &DenseMatrix, p: &DenseMatrix) -> (DenseMatrix, Vec<f64>) {
    let (m, n) = a.shape();
    // (AH)_{kj} = Σ_i A_ki H_ij, variable (i,j) at index i*m + j
    let mut rows = DenseMatrix::zeros(m * m, n * m);
    let mut rhs = Vec::with_capacity(m * m);
    for k in 0..m {
        for j in 0..m {
            let row = rows.row_mut(k * m + j);
            for i in 0..n {
                row[i * m + j] = a.get(k, i);
            }
            rhs.push(p.get(k, j));
        }
    }
    (rows, rhs)
}

/// 1-norm minimization over ah-symmetric generalized inverses, written as
/// `AH = AA⁺` with `AA⁺` from the SVD pseudoinverse.
pub fn build_p13(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<LpModel> {
    nonzero(a)?;
    let (m, n) = a.shape();
    let r = numerical_rank(a, tol);
    let proj = a.mul(&pseudoinverse(a, tol));
    let (rows, rhs) = ah_rows(a, &proj);
    reduce(LpKind::P13, rows, rhs, m * r, vec![1.0; n * m], full_var_map(n, m), (m, n, r))
}

/// 1-norm minimization over ah-symmetric reflexive generalized inverses.
///
/// `HAH = H` is linearized as `H·(AĤ) = H` using an ah-symmetric reflexive
/// `Ĥ`; `AĤ` also serves as the projector `AA⁺` on the right of `AH = AA⁺`.
pub fn build_p123(a: &DenseMatrix, hhat: &GinvResult, tol: &ToleranceConfig) -> Result<LpModel> {
    nonzero(a)?;
    let (m, n) = a.shape();
    let h = &hhat.h;
    if h.shape() != (n, m) {
        return Err(Error::ShapeMismatch(format!(
            "linearizer is {}x{}, expected {n}x{m}",
            h.rows(),
            h.cols()
        )));
    }
    let proj = a.mul(h);
    let residual = [
        proj.mul(a).max_abs_diff(a)?,
        h.mul(&proj).max_abs_diff(h)?,
        proj.max_abs_diff(&proj.transpose())?,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if residual > tol.scaled_residual(a) {
        return Err(Error::InvalidLinearizer(residual));
    }
    let r = numerical_rank(a, tol);
    let (ah, ah_rhs) = ah_rows(a, &proj);
    // (H P − H)_{ij} = Σ_l H_il (P_lj − δ_lj)
    let mut lin = DenseMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            let row = lin.row_mut(i * m + j);
            for l in 0..m {
                row[i * m + l] = proj.get(l, j) - if l == j { 1.0 } else { 0.0 };
            }
        }
    }
    let rows = ah.vstack(&lin)?;
    let mut rhs = ah_rhs;
    rhs.extend(std::iter::repeat_n(0.0, n * m));
    let rank = m * n - r * n + r * r;
    reduce(LpKind::P123, rows, rhs, rank, vec![1.0; n * m], full_var_map(n, m), (m, n, r))
}

/// Largest nonzero count a vertex of the model may have.
pub fn vertex_nnz_bound(kind: LpKind, m: usize, n: usize, r: usize) -> usize {
    match kind {
        LpKind::P1 => r * r,
        LpKind::P1Sym => r * r + r,
        LpKind::P13 => m * r,
        LpKind::P123 => m * r + (m - r) * (n - r),
    }
}
