//! Dense two-phase revised simplex for `min Σ w_v |h_v|, E h = b`.
//!
//! Columns are the split variables `h⁺` (index `v`) and `h⁻` (index
//! `p + v`), followed by one artificial per row for phase one. The basis
//! inverse is kept explicitly, updated by elementary row operations and
//! recomputed from scratch periodically.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::model::LpModel;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Reduced costs above `-OPT_TOL` count as nonnegative.
const OPT_TOL: f64 = 1e-9;
/// Ratio-test candidates need a pivot entry above this.
const RATIO_PIVOT_TOL: f64 = 1e-9;
/// Pivot entries below this magnitude are a numerical failure.
const BREAKDOWN_PIVOT: f64 = 1e-11;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;
/// Basis inverse recomputed after this many updates.
const REFACTOR_EVERY: usize = 100;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    pub max_iterations: Option<usize>,
}

/// Optimal basic solution of an [`LpModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub h: DenseMatrix,
    pub objective_value: f64,
    /// Basic columns: `v` for `h⁺_v`, `p + v` for `h⁻_v`, `2p + i` for the
    /// artificial of row `i` (only at zero level).
    pub basis: Vec<usize>,
    pub is_vertex: bool,
    pub iterations: usize,
    /// Variable values `h = h⁺ − h⁻`.
    pub values: Vec<f64>,
}

struct Tableau<'a> {
    e: &'a DenseMatrix,
    b: Vec<f64>,
    p: usize,
    k: usize,
    /// Row sign flips making `b ≥ 0`; column `j` of the working matrix is
    /// `flip ∘ E_j`.
    flip: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    in_basis: Vec<bool>,
    updates: usize,
}

impl<'a> Tableau<'a> {
    fn new(model: &'a LpModel) -> Self {
        let e = &model.eq_matrix;
        let p = e.cols();
        let k = e.rows();
        let flip: Vec<f64> = model
            .eq_rhs
            .iter()
            .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let b: Vec<f64> = model.eq_rhs.iter().zip(&flip).map(|(v, f)| v * f).collect();
        let basis: Vec<usize> = (0..k).map(|i| 2 * p + i).collect();
        let mut in_basis = vec![false; 2 * p + k];
        for &j in &basis {
            in_basis[j] = true;
        }
        let binv = (0..k)
            .map(|i| {
                let mut row = vec![0.0; k];
                row[i] = 1.0;
                row
            })
            .collect();
        Tableau {
            e,
            xb: b.clone(),
            b,
            p,
            k,
            flip,
            basis,
            binv,
            in_basis,
            updates: 0,
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let p = self.p;
        if j >= 2 * p {
            let mut c = vec![0.0; self.k];
            c[j - 2 * p] = 1.0;
            return c;
        }
        let (v, s) = if j < p { (j, 1.0) } else { (j - p, -1.0) };
        (0..self.k).map(|i| s * self.flip[i] * self.e.get(i, v)).collect()
    }

    fn binv_times(&self, col: &[f64]) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| row.iter().zip(col).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `y = c_Bᵀ B⁻¹`.
    fn duals(&self, cost: &impl Fn(usize) -> f64) -> Vec<f64> {
        let mut y = vec![0.0; self.k];
        for (i, &j) in self.basis.iter().enumerate() {
            let c = cost(j);
            if c == 0.0 {
                continue;
            }
            for (yl, bl) in y.iter_mut().zip(&self.binv[i]) {
                *yl += c * bl;
            }
        }
        y
    }

    /// `z_v = Σ_i y_i flip_i E_iv` for every structural variable `v`.
    fn priced(&self, y: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.p];
        for i in 0..self.k {
            let yi = y[i] * self.flip[i];
            if yi == 0.0 {
                continue;
            }
            for (zv, ev) in z.iter_mut().zip(self.e.row(i)) {
                *zv += yi * ev;
            }
        }
        z
    }

    fn refactor(&mut self) -> Result<()> {
        let k = self.k;
        let mut bmat = DMatrix::<f64>::zeros(k, k);
        for (c, &j) in self.basis.iter().enumerate() {
            for (i, v) in self.column(j).into_iter().enumerate() {
                bmat[(i, c)] = v;
            }
        }
        let inv = bmat
            .try_inverse()
            .ok_or_else(|| Error::NumericalBreakdown("basis matrix became singular".into()))?;
        self.binv = (0..k).map(|i| (0..k).map(|j| inv[(i, j)]).collect()).collect();
        self.xb = self.binv_times(&self.b.clone());
        self.updates = 0;
        Ok(())
    }

    fn pivot(&mut self, row: usize, entering: usize, dir: &[f64]) -> Result<()> {
        let piv = dir[row];
        if piv.abs() < BREAKDOWN_PIVOT {
            return Err(Error::NumericalBreakdown(format!("pivot {piv:e} too small")));
        }
        let theta = self.xb[row] / piv;
        for (i, x) in self.xb.iter_mut().enumerate() {
            if i == row {
                *x = theta;
            } else {
                *x -= dir[i] * theta;
                if *x < 0.0 && *x > -1e-12 {
                    *x = 0.0;
                }
            }
        }
        let pivot_row: Vec<f64> = self.binv[row].iter().map(|v| v / piv).collect();
        for (i, r) in self.binv.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = dir[i];
            if f == 0.0 {
                continue;
            }
            for (a, b) in r.iter_mut().zip(&pivot_row) {
                *a -= f * b;
            }
        }
        self.binv[row] = pivot_row;
        self.in_basis[self.basis[row]] = false;
        self.in_basis[entering] = true;
        self.basis[row] = entering;
        self.updates += 1;
        if self.updates >= REFACTOR_EVERY {
            self.refactor()?;
        }
        Ok(())
    }

    /// Runs simplex iterations for the given cost until optimal.
    /// Artificial columns never enter.
    fn optimize(&mut self, cost: impl Fn(usize) -> f64, iterations: &mut usize, limit: usize) -> Result<()> {
        let p = self.p;
        let mut degenerate = 0usize;
        let mut verified = false;
        loop {
            let y = self.duals(&cost);
            let z = self.priced(&y);
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..2 * p {
                if self.in_basis[j] {
                    continue;
                }
                let d = if j < p { cost(j) - z[j] } else { cost(j) + z[j - p] };
                if d >= -OPT_TOL {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.is_none_or(|(_, best)| d < best) {
                    entering = Some((j, d));
                }
            }
            let Some((q, _)) = entering else {
                if verified || self.updates == 0 {
                    return Ok(());
                }
                // confirm optimality against a fresh basis inverse
                self.refactor()?;
                verified = true;
                continue;
            };
            verified = false;
            if *iterations >= limit {
                return Err(Error::IterationLimit(*iterations));
            }
            *iterations += 1;

            let dir = self.binv_times(&self.column(q));
            let mut leave: Option<(usize, f64)> = None;
            let mut tiny = false;
            for i in 0..self.k {
                let a = dir[i];
                if a <= RATIO_PIVOT_TOL {
                    tiny |= a > BREAKDOWN_PIVOT;
                    continue;
                }
                let ratio = self.xb[i].max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((l, best)) => {
                        if ratio < best - 1e-12 {
                            true
                        } else if ratio <= best + 1e-12 {
                            if bland {
                                self.basis[i] < self.basis[l]
                            } else {
                                // prefer artificials leaving, then larger pivots
                                let ai = self.basis[i] >= 2 * p;
                                let al = self.basis[l] >= 2 * p;
                                (ai && !al) || (ai == al && a > dir[l])
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, theta)) = leave else {
                return Err(Error::NumericalBreakdown(if tiny {
                    "all ratio-test pivots below tolerance".into()
                } else {
                    "objective unbounded below".into()
                }));
            };
            if theta <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, q, &dir)?;
        }
    }

    /// Pivots zero-level artificials out of the basis where possible.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let p = self.p;
        for row in 0..self.k {
            if self.basis[row] < 2 * p {
                continue;
            }
            let rho = self.binv[row].clone();
            let z = self.priced(&rho);
            let mut best: Option<(usize, f64)> = None;
            for (v, &zv) in z.iter().enumerate() {
                if self.in_basis[v] || self.in_basis[p + v] {
                    continue;
                }
                if zv.abs() > RATIO_PIVOT_TOL && best.is_none_or(|(_, b)| zv.abs() > b) {
                    best = Some((v, zv.abs()));
                }
            }
            if let Some((v, _)) = best {
                let dir = self.binv_times(&self.column(v));
                self.pivot(row, v, &dir)?;
            }
        }
        Ok(())
    }
}

/// Solves the model to an optimal vertex.
///
/// Pricing is Dantzig's rule, switching to Bland's rule after a run of
/// degenerate pivots until progress resumes.
pub fn simplex_solve(model: &LpModel, opts: &SimplexOptions) -> Result<LpSolution> {
    let p = model.num_vars();
    let k = model.num_rows();
    let limit = opts.max_iterations.unwrap_or(50_000 + 20 * (k + 2 * p));
    let mut tab = Tableau::new(model);
    let mut iterations = 0;

    let scale = 1.0 + tab.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    tab.optimize(|j| if j >= 2 * p { 1.0 } else { 0.0 }, &mut iterations, limit)?;
    let infeasibility: f64 = tab
        .basis
        .iter()
        .zip(&tab.xb)
        .filter(|(&j, _)| j >= 2 * p)
        .map(|(_, x)| x.abs())
        .sum();
    if infeasibility > 1e-8 * scale {
        return Err(Error::Infeasible(infeasibility));
    }
    tab.drive_out_artificials()?;

    let w = &model.objective;
    tab.optimize(
        |j| {
            if j < p {
                w[j]
            } else if j < 2 * p {
                w[j - p]
            } else {
                0.0
            }
        },
        &mut iterations,
        limit,
    )?;

    let mut values = vec![0.0; p];
    for (&j, &x) in tab.basis.iter().zip(&tab.xb) {
        if j < p {
            values[j] += x;
        } else if j < 2 * p {
            values[j - p] -= x;
        }
    }
    let objective_value = values.iter().zip(w).map(|(v, c)| v.abs() * c).sum();
    Ok(LpSolution {
        h: model.assemble(&values),
        objective_value,
        basis: tab.basis,
        is_vertex: true,
        iterations,
        values,
    })
}
