//! Deterministic instances with closed-form answers: the small worked
//! examples, worst cases for the local searches, and LP instances whose
//! optimal vertices are as dense as the vertex bounds allow.
//!
//! Entries are computed in exact rational arithmetic and rounded to `f64`
//! once, so comparisons are against formulas rather than stored data.

mod exact;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use exact::{q, qf, qi, to_f64, QMatrix, Q};

/// A generated matrix with whatever is known about it in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub name: String,
    pub a: DenseMatrix,
    pub known_h: Option<DenseMatrix>,
    pub known_w: Option<DenseMatrix>,
    pub known_v: Option<DenseMatrix>,
    pub known_values: BTreeMap<String, f64>,
    pub params: BTreeMap<String, f64>,
}

impl FamilyInstance {
    fn new(name: &str, a: DenseMatrix) -> Self {
        FamilyInstance {
            name: name.to_string(),
            a,
            known_h: None,
            known_w: None,
            known_v: None,
            known_values: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    fn value(mut self, key: &str, v: f64) -> Self {
        self.known_values.insert(key.to_string(), v);
        self
    }

    fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    /// A named known value; panics when absent.
    pub fn known(&self, key: &str) -> f64 {
        self.known_values[key]
    }
}

fn int_matrix<const R: usize, const C: usize>(rows: [[i64; C]; R]) -> QMatrix {
    QMatrix::from_fn(R, C, |i, j| qi(rows[i][j]))
}

/// `[[5,4,2],[4,5,−2],[2,−2,8]]`, which satisfies `A² = 9A`, so `A/81` is
/// its pseudoinverse.
pub fn sym_3x3() -> FamilyInstance {
    let a = int_matrix([[5, 4, 2], [4, 5, -2], [2, -2, 8]]);
    let h = QMatrix::from_fn(3, 3, |i, j| a.get(i, j) / qi(81));
    FamilyInstance {
        known_h: Some(h.to_dense()),
        ..FamilyInstance::new("sym_3x3", a.to_dense())
    }
    .value("opt_onenorm", 34.0 / 81.0)
    .value("block_norm_01", 2.0)
    .value("block_norm_02", 17.0 / 36.0)
    .value("block_norm_12", 17.0 / 36.0)
    .param("r", 2.0)
}

/// `[[1,3,8],[2,2,8],[3,1,8]]` (third column `2a₁ + 2a₂`) with an
/// ah-symmetric reflexive generalized inverse of 1-norm 9/8 that no column
/// block attains.
pub fn ah_3x3() -> FamilyInstance {
    let a = int_matrix([[1, 3, 8], [2, 2, 8], [3, 1, 8]]);
    let h = QMatrix::from_fn(3, 3, |i, j| {
        [
            [q(-1, 4), q(0, 1), q(1, 4)],
            [q(1, 4), q(0, 1), q(-1, 4)],
            [q(1, 24), q(1, 24), q(1, 24)],
        ][i][j]
            .clone()
    });
    FamilyInstance {
        known_h: Some(h.to_dense()),
        ..FamilyInstance::new("ah_3x3", a.to_dense())
    }
    .value("opt_onenorm", 9.0 / 8.0)
    .value("block_norm_01", 7.0 / 6.0)
    .value("block_norm_02", 31.0 / 24.0)
    .value("block_norm_12", 31.0 / 24.0)
    .param("r", 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToeplitzCase {
    /// `[[Ã, b, 0], [cᵀ, d, 0], [0, 0, 0]]`, for the two-sided search.
    General,
    /// `[[Ã, b, 0], [bᵀ, d, 0], [0, 0, 0]]` with `δ_L = δ_U`.
    Symmetric,
    /// `[[Ã, b, 0], [0, 0, 0]]`, for the column search.
    Ah,
}

/// Instances where the determinant local search stalls at `Ã` while a
/// neighboring block has a far smaller inverse.
///
/// `Ã⁻¹` is the Toeplitz matrix with ones on the diagonal, `1 + kδ_U` on
/// the `k`-th superdiagonal and `1 + kδ_L` on the `k`-th subdiagonal;
/// `b = Ã1`, `cᵀ = 1ᵀÃ`, `d = 1ᵀÃ1`. Swapping `b` (or `c`) into `Ã`
/// leaves the determinant unchanged. Rows and columns `0..r` hold `Ã`,
/// index `r` holds `b`/`c`, and one zero row and column pad the rest.
///
/// Known values: `inv_norm = ‖Ã⁻¹‖₁`, `swap_b_norm = ‖(Ã₁(b))⁻¹‖₁` (first
/// column replaced by `b`), `swap_cb_norm` (first row and column replaced)
/// and `ratio_limit`, the limit of the norm ratio as `δ → 0`.
pub fn toeplitz_family(r: usize, delta_l: f64, delta_u: f64, case: ToeplitzCase) -> Result<FamilyInstance> {
    if r < 3 {
        return Err(Error::InvalidParams(format!("toeplitz family needs r >= 3, got {r}")));
    }
    if !(delta_l >= 0.0 && delta_u >= 0.0) || (delta_l == 0.0 && delta_u == 0.0) {
        return Err(Error::InvalidParams(
            "deltas must be nonnegative and not both zero".into(),
        ));
    }
    if case == ToeplitzCase::Symmetric && delta_l != delta_u {
        return Err(Error::InvalidParams("symmetric case needs delta_l == delta_u".into()));
    }
    let (dl, du) = (qf(delta_l)?, qf(delta_u)?);
    let tinv = QMatrix::from_fn(r, r, |i, j| {
        if j >= i {
            Q::one() + qi((j - i) as i64) * &du
        } else {
            Q::one() + qi((i - j) as i64) * &dl
        }
    });
    let t = tinv
        .inverse()
        .ok_or_else(|| Error::InvalidParams("Toeplitz matrix is singular".into()))?;
    let ones = QMatrix::from_fn(r, 1, |_, _| Q::one());
    let b = t.mul(&ones);
    let c = ones.transpose().mul(&t);
    let d = c.mul(&ones).get(0, 0).clone();

    let (rows, cols) = match case {
        ToeplitzCase::Ah => (r + 1, r + 2),
        _ => (r + 2, r + 2),
    };
    let mut a = QMatrix::zeros(rows, cols);
    for i in 0..r {
        for j in 0..r {
            a.set(i, j, t.get(i, j).clone());
        }
        a.set(i, r, b.get(i, 0).clone());
    }
    match case {
        ToeplitzCase::General => {
            for j in 0..r {
                a.set(r, j, c.get(0, j).clone());
            }
            a.set(r, r, d);
        }
        ToeplitzCase::Symmetric => {
            for j in 0..r {
                a.set(r, j, b.get(j, 0).clone());
            }
            a.set(r, r, d);
        }
        ToeplitzCase::Ah => {}
    }

    // (Ã₁(b))⁻¹ = Ã⁻¹ − (1 − e₁) e₁ᵀ Ã⁻¹, and then (Ã₁(c,b))⁻¹ subtracts
    // (Ã₁(b))⁻¹ e₁ (1 − e₁)ᵀ
    let mut swap_b = tinv.clone();
    for i in 1..r {
        for j in 0..r {
            let v = swap_b.get(i, j) - tinv.get(0, j);
            swap_b.set(i, j, v);
        }
    }
    let mut swap_cb = swap_b.clone();
    for i in 0..r {
        for j in 1..r {
            let v = swap_cb.get(i, j) - swap_b.get(i, 0);
            swap_cb.set(i, j, v);
        }
    }
    let rf = r as f64;
    let name = match case {
        ToeplitzCase::General => "toeplitz_general",
        ToeplitzCase::Symmetric => "toeplitz_symmetric",
        ToeplitzCase::Ah => "toeplitz_ah",
    };
    let limit = if case == ToeplitzCase::Ah { rf } else { rf * rf };
    Ok(FamilyInstance::new(name, a.to_dense())
        .value("inv_norm", to_f64(&tinv.one_norm()))
        .value("inv_norm_formula", rf * rf + (rf.powi(3) - rf) / 6.0 * (delta_l + delta_u))
        .value("swap_b_norm", to_f64(&swap_b.one_norm()))
        .value("swap_cb_norm", to_f64(&swap_cb.one_norm()))
        .value("swap_cb_norm_formula", 1.0 + (rf.powi(3) - rf) / 3.0 * (delta_l + delta_u))
        .value("ratio_limit", limit)
        .param("r", rf)
        .param("delta_l", delta_l)
        .param("delta_u", delta_u))
}

/// `Ã_n(a, b)`: `a` on the diagonal and `b` elsewhere.
pub fn tilde_a(n: usize, a: f64, b: f64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| if i == j { a } else { b })
}

/// Closed-form inverse of `Ã_n(a, b)`, which is again of that form.
pub fn tilde_a_inverse(n: usize, a: f64, b: f64) -> Result<DenseMatrix> {
    let nf = n as f64;
    let den = (b - a) * (a + (nf - 1.0) * b);
    if den == 0.0 {
        return Err(Error::SingularMatrix);
    }
    Ok(tilde_a(n, (-a - (nf - 2.0) * b) / den, b / den))
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParams(format!("k must be positive, got {k}")));
    }
    Ok(())
}

/// `[[1,0,k,k],[0,1,k,−k]]`: columns `{0,1}` are a local minimizer of the
/// inverse 1-norm (value 2, every neighbor `2 + 1/k`) while columns `{2,3}`
/// give `2/k`.
pub fn no_const_rank2(k: f64) -> Result<FamilyInstance> {
    check_k(k)?;
    let a = DenseMatrix::from_rows(&[[1.0, 0.0, k, k], [0.0, 1.0, k, -k]]);
    Ok(FamilyInstance::new("no_const_rank2", a)
        .value("local_min_norm", 2.0)
        .value("neighbor_norm", 2.0 + 1.0 / k)
        .value("escape_norm", 2.0 / k)
        .value("expected_ratio", k)
        .param("k", k)
        .param("r", 2.0))
}

/// `[I_r | k·Ã_r(−1,1)]`: `I_r` is a local minimizer (value `r`, neighbors
/// `2(r−1) + 1/k`) while the right block gives `r/k`.
pub fn no_const_general(r: usize, k: f64) -> Result<FamilyInstance> {
    if r < 3 {
        return Err(Error::InvalidParams(format!("needs r >= 3, got {r}")));
    }
    check_k(k)?;
    let tilde = tilde_a(r, -1.0, 1.0).scale(k);
    let a = DenseMatrix::identity(r).hstack(&tilde)?;
    let rf = r as f64;
    Ok(FamilyInstance::new("no_const_general", a)
        .value("local_min_norm", rf)
        .value("neighbor_norm", 2.0 * (rf - 1.0) + 1.0 / k)
        .value("escape_norm", rf / k)
        .value("expected_ratio", k)
        .value("tilde_det", (-2f64).powi(r as i32 - 1) * (rf - 2.0))
        .param("k", k)
        .param("r", rf))
}

/// `[Â, Â1]` with `Â = (J + rI)⁻¹`: every `r × r` block has inverse norm
/// `2r²` while the optimum is `r(r+1)`, so the 1-norm local search is off
/// by exactly `2r/(r+1)`.
pub fn tight_ratio_r_plus_1(r: usize) -> Result<FamilyInstance> {
    if r < 2 {
        return Err(Error::InvalidParams(format!("needs r >= 2, got {r}")));
    }
    let ri = r as i64;
    let den = 2 * ri * ri;
    let hat = QMatrix::from_fn(r, r, |i, j| if i == j { q(2 * ri - 1, den) } else { q(-1, den) });
    let col = QMatrix::from_fn(r, 1, |_, _| q(1, 2 * ri));
    let a = hat.hstack(&col);
    let rf = r as f64;
    Ok(FamilyInstance::new("tight_ratio_r_plus_1", a.to_dense())
        .value("block_norm", 2.0 * rf * rf)
        .value("opt_onenorm", rf * (rf + 1.0))
        .value("expected_ratio", 2.0 * rf / (rf + 1.0))
        .param("r", rf))
}

/// Symmetric `(r+2) × (r+2)` matrix of rank `r` whose symmetric 1-norm
/// LP has a unique optimal vertex with `r² + r` nonzeros.
///
/// `known_h = [[I − J, Y], [Yᵀ, 0]]` and `known_w` certifies optimality
/// with `‖AWA‖_max ≤ 1` and `⟨A,W⟩ = r² + r`.
pub fn p1sym_sharp(r: usize) -> Result<FamilyInstance> {
    if r < 3 {
        return Err(Error::InvalidParams(format!("needs r >= 3, got {r}")));
    }
    let ri = r as i64;
    let x = QMatrix::from_fn(r, 2, |i, j| match (i, j) {
        (0, 0) => q(ri, 2 * (ri - 1)),
        (0, _) => q(-ri * (ri - 2), 2 * (ri - 1) * (ri - 1)),
        (_, 0) => q(1, 2 * (ri - 1)),
        _ => q(ri, 2 * (ri - 1) * (ri - 1)),
    });
    let y = QMatrix::from_fn(r, 2, |i, j| match (i, j) {
        (0, 0) => Q::zero(),
        (0, _) => qi(-1),
        (_, 0) => qi(-1),
        _ => Q::zero(),
    });
    let h0 = QMatrix::from_fn(r, r, |i, j| if i == j { Q::zero() } else { qi(-1) });
    let mut dmat = QMatrix::zeros(r, r);
    dmat.set(0, 0, q(ri - 1, ri));
    let core = h0.add(&x.mul(&y.transpose())).add(&y.mul(&x.transpose()));
    let a0 = core
        .inverse()
        .ok_or_else(|| Error::InvalidParams("singular core".into()))?;
    let left = QMatrix::identity(r).vstack(&x.transpose());
    let a = left.mul(&a0).mul(&left.transpose());
    let h = h0.hstack(&y).vstack(&y.transpose().hstack(&QMatrix::zeros(2, 2)));
    let w_block = core.mul(&h0.add(&dmat)).mul(&core);
    let mut w = QMatrix::zeros(r + 2, r + 2);
    for i in 0..r {
        for j in 0..r {
            w.set(i, j, w_block.get(i, j).clone());
        }
    }
    let value = (r * r + r) as f64;
    Ok(FamilyInstance {
        known_h: Some(h.to_dense()),
        known_w: Some(w.to_dense()),
        ..FamilyInstance::new("p1sym_sharp", a.to_dense())
    }
    .value("opt_onenorm", value)
    .value("nnz_expected", value)
    .param("r", r as f64)
    .param("n", (r + 2) as f64))
}

/// `m × r²` matrix of rank `r` whose ah-symmetric reflexive 1-norm LP has
/// a unique optimal vertex with `r² + r²(m−r)` nonzeros.
///
/// The columns of `Y` run over ordered pairs `(i, j)`, `i ≠ j`, in
/// lexicographic order, with `(m+r)/(2m)` in row `i` and `(m−r+1)/(2m)` in
/// row `j`. `known_w` and `known_v` satisfy
/// `AᵀWAᵀ + V(I − AA⁺) = sign(H) + D` with `‖D‖_max < 1`.
pub fn p123_sharp(m: usize, r: usize) -> Result<FamilyInstance> {
    if r < 2 || m <= r {
        return Err(Error::InvalidParams(format!("needs r >= 2 and m > r, got m={m}, r={r}")));
    }
    let (mi, ri) = (m as i64, r as i64);
    let big = q(mi + ri, 2 * mi);
    let small = q(mi - ri + 1, 2 * mi);
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let p = pairs.len();
    let n = r * r;
    let x = QMatrix::from_fn(r, m - r, |_, _| Q::one());
    let y = QMatrix::from_fn(r, p, |row, c| {
        let (i, j) = pairs[c];
        if row == i {
            big.clone()
        } else if row == j {
            small.clone()
        } else {
            Q::zero()
        }
    });
    let h0 = QMatrix::identity(r);
    let h1 = QMatrix::from_fn(p, r, |c, i| if pairs[c].0 == i { Q::one() } else { Q::zero() });
    let d1 = QMatrix::from_fn(p, r, |c, i| {
        let (a, b) = pairs[c];
        if i == a {
            Q::zero()
        } else if i == b {
            q(2 * mi - 2 * ri + 1, 2 * mi)
        } else {
            q(mi - ri, 2 * mi)
        }
    });
    let gram = QMatrix::identity(r).add(&x.mul(&x.transpose()));
    let a0 = h0
        .add(&y.mul(&h1))
        .mul(&gram)
        .inverse()
        .ok_or_else(|| Error::InvalidParams("singular core".into()))?;
    let left = QMatrix::identity(r).vstack(&x.transpose());
    let right = QMatrix::identity(r).hstack(&y);
    let a = left.mul(&a0).mul(&right);
    let stacked = h0.vstack(&h1);
    let h = stacked.mul(&QMatrix::identity(r).hstack(&x));
    let w0 = h0
        .sign()
        .add(&h0.mul(&x).sign().mul(&x.transpose()))
        .mul(&gram.inverse().expect("positive definite"));
    let a0_inv_t = a0.inverse().expect("nonsingular").transpose();
    let w_block = a0_inv_t.mul(&w0).mul(&a0_inv_t);
    let mut w = QMatrix::zeros(m, n);
    for i in 0..r {
        for j in 0..r {
            w.set(i, j, w_block.get(i, j).clone());
        }
    }
    let mut d = QMatrix::zeros(n, m);
    for c in 0..p {
        for i in 0..r {
            d.set(r + c, i, d1.get(c, i).clone());
        }
    }
    let v = h.sign().add(&d);
    let nnz = (r * r + r * r * (m - r)) as f64;
    Ok(FamilyInstance {
        known_h: Some(h.to_dense()),
        known_w: Some(w.to_dense()),
        known_v: Some(v.to_dense()),
        ..FamilyInstance::new("p123_sharp", a.to_dense())
    }
    .value("opt_onenorm", to_f64(&h.one_norm()))
    .value("nnz_expected", nnz)
    .value("d_max", d_max(&d1))
    .param("m", m as f64)
    .param("n", n as f64)
    .param("r", r as f64))
}

fn d_max(d: &QMatrix) -> f64 {
    let mut best = 0.0f64;
    for i in 0..d.rows {
        for j in 0..d.cols {
            best = best.max(to_f64(d.get(i, j)).abs());
        }
    }
    best
}

/// `[[0, A], [Aᵀ, 0]]`.
pub fn sym_embedding(a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, false) => a.get(i, j - m),
        (false, true) => a.get(j, i - m),
        _ => 0.0,
    })
}

/// Instance by name with parameters, for the command line.
///
/// Recognized names and parameters: `sym_3x3`, `ah_3x3`,
/// `toeplitz_general|toeplitz_symmetric|toeplitz_ah` (`r`, `delta_l`,
/// `delta_u`), `no_const_rank2` (`k`), `no_const_general` (`r`, `k`),
/// `tight_ratio_r_plus_1` (`r`), `p1sym_sharp` (`r`), `p123_sharp`
/// (`m`, `r`).
pub fn by_name(name: &str, params: &BTreeMap<String, f64>) -> Result<FamilyInstance> {
    let get = |key: &str, default: Option<f64>| -> Result<f64> {
        params
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| Error::InvalidParams(format!("family {name} needs parameter {key}")))
    };
    let count = |key: &str, default: Option<f64>| -> Result<usize> {
        let v = get(key, default)?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidParams(format!("{key} must be a nonnegative integer")));
        }
        Ok(v as usize)
    };
    match name {
        "sym_3x3" => Ok(sym_3x3()),
        "ah_3x3" => Ok(ah_3x3()),
        "toeplitz_general" | "toeplitz_symmetric" | "toeplitz_ah" => {
            let case = match name {
                "toeplitz_general" => ToeplitzCase::General,
                "toeplitz_symmetric" => ToeplitzCase::Symmetric,
                _ => ToeplitzCase::Ah,
            };
            let dl = get("delta_l", Some(1e-3))?;
            let du_default = if case == ToeplitzCase::Symmetric { dl } else { 0.0 };
            toeplitz_family(count("r", Some(3.0))?, dl, get("delta_u", Some(du_default))?, case)
        }
        "no_const_rank2" => no_const_rank2(get("k", Some(10.0))?),
        "no_const_general" => no_const_general(count("r", Some(3.0))?, get("k", Some(10.0))?),
        "tight_ratio_r_plus_1" => tight_ratio_r_plus_1(count("r", Some(3.0))?),
        "p1sym_sharp" => p1sym_sharp(count("r", Some(3.0))?),
        "p123_sharp" => p123_sharp(count("m", Some(3.0))?, count("r", Some(2.0))?),
        other => Err(Error::InvalidParams(format!("unknown family {other}"))),
    }
}
