//! Block constructions of reflexive generalized inverses.
//!
//! Each construction places the inverse (or pseudoinverse) of one
//! submatrix of `A` into an otherwise zero `n × m` matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{full_column_rank_pinv, numerical_rank, DenseMatrix, Lu, ToleranceConfig};

/// Ordered, duplicate-free subset of `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawIndexSet")]
pub struct IndexSet {
    indices: Vec<usize>,
    universe: usize,
}

#[derive(Deserialize)]
struct RawIndexSet {
    indices: Vec<usize>,
    universe: usize,
}

impl TryFrom<RawIndexSet> for IndexSet {
    type Error = Error;

    fn try_from(raw: RawIndexSet) -> Result<Self> {
        IndexSet::new(raw.indices, raw.universe)
    }
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        let mut seen = vec![false; universe];
        for &i in &indices {
            if i >= universe {
                return Err(Error::InvalidIndexSet(format!(
                    "index {i} outside 0..{universe}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidIndexSet(format!("duplicate index {i}")));
            }
            seen[i] = true;
        }
        Ok(IndexSet { indices, universe })
    }

    /// `{0, 1, …, len−1}` inside `0..universe`.
    pub fn range(len: usize, universe: usize) -> Self {
        assert!(len <= universe);
        IndexSet {
            indices: (0..len).collect(),
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        Self::range(universe, universe)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    /// Indices of the universe not in the set, ascending.
    pub fn complement(&self) -> Vec<usize> {
        let mut inside = vec![false; self.universe];
        for &i in &self.indices {
            inside[i] = true;
        }
        (0..self.universe).filter(|&i| !inside[i]).collect()
    }

    /// Replaces the element at `position` with `incoming`, keeping order.
    pub fn replace(&mut self, position: usize, incoming: usize) {
        debug_assert!(incoming < self.universe && !self.contains(incoming));
        self.indices[position] = incoming;
    }

    pub fn sorted(&self) -> IndexSet {
        let mut indices = self.indices.clone();
        indices.sort_unstable();
        IndexSet {
            indices,
            universe: self.universe,
        }
    }

    fn check_universe(&self, universe: usize, what: &str) -> Result<()> {
        if self.universe != universe {
            return Err(Error::InvalidIndexSet(format!(
                "{what} index set has universe {} but the matrix dimension is {universe}",
                self.universe
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GinvKind {
    Symmetric,
    Ah,
    Ha,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapSide {
    Row,
    Column,
    Principal,
}

/// One accepted swap: the element at `out_index` left the index set and
/// `in_index` entered. `ratio` is the improvement factor (determinant growth
/// for determinant searches, norm decrease for the 1-norm search).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub out_index: usize,
    pub in_index: usize,
    pub side: SwapSide,
    pub ratio: f64,
}

/// A generalized inverse together with how it was built.
///
/// `s` and `t` are the rows and columns of `A` the construction used. For
/// the ah kind `s` covers every row; `anchor_rows` then records the rows of
/// the nonsingular `r × r` block that selected `t`, when known. The ha kind
/// mirrors this with `anchor_cols`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GinvResult {
    pub h: DenseMatrix,
    pub kind: GinvKind,
    pub s: IndexSet,
    pub t: IndexSet,
    pub one_norm: f64,
    pub nnz: usize,
    pub trace: Vec<SwapRecord>,
    pub anchor_rows: Option<IndexSet>,
    pub anchor_cols: Option<IndexSet>,
    pub sweep_limit_exceeded: bool,
}

impl GinvResult {
    fn assemble(h: DenseMatrix, kind: GinvKind, s: IndexSet, t: IndexSet, tol: &ToleranceConfig) -> Self {
        GinvResult {
            one_norm: h.one_norm(),
            nnz: h.nnz(tol.nnz_tol),
            h,
            kind,
            s,
            t,
            trace: Vec::new(),
            anchor_rows: None,
            anchor_cols: None,
            sweep_limit_exceeded: false,
        }
    }
}

fn check_nonempty(a: &DenseMatrix) -> Result<()> {
    if a.is_empty() {
        return Err(Error::ShapeMismatch("matrix has no entries".into()));
    }
    Ok(())
}

pub(crate) fn check_symmetric(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<()> {
    match a.asymmetry() {
        None => Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }),
        Some(d) if d > tol.scaled_residual(a) => Err(Error::NotSymmetric(d)),
        Some(_) => Ok(()),
    }
}

/// Inverse of a square block, mapping singularity to `SingularBlock`.
pub(crate) fn block_inverse(block: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = Lu::factor(block)?;
    if lu.is_singular() {
        return Err(Error::SingularBlock);
    }
    lu.inverse().map_err(|_| Error::SingularBlock)
}

fn check_cardinality(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::WrongCardinality { expected, got });
    }
    Ok(())
}

/// `H` zero except `H[S,S] = A[S]⁻¹`, for symmetric `A` and `|S| = rank(A)`.
///
/// The block inverse is symmetrized so `H = Hᵀ` holds exactly.
pub fn symmetric_block(a: &DenseMatrix, s: &IndexSet, tol: &ToleranceConfig) -> Result<GinvResult> {
    check_nonempty(a)?;
    check_symmetric(a, tol)?;
    s.check_universe(a.rows(), "row")?;
    check_cardinality(numerical_rank(a, tol), s.len())?;
    let idx = s.indices();
    let inv = block_inverse(&a.submatrix(idx, idx))?;
    let k = idx.len();
    let sym = DenseMatrix::from_fn(k, k, |i, j| 0.5 * (inv.get(i, j) + inv.get(j, i)));
    let mut h = DenseMatrix::zeros(a.cols(), a.rows());
    h.scatter(idx, idx, &sym);
    Ok(GinvResult::assemble(h, GinvKind::Symmetric, s.clone(), s.clone(), tol))
}

/// `H` zero except rows `T`, which hold `Â⁺` for `Â = A[:,T]`.
///
/// The result satisfies `AHA = A`, `HAH = H` and `(AH)ᵀ = AH`.
pub fn column_block(a: &DenseMatrix, t: &IndexSet, tol: &ToleranceConfig) -> Result<GinvResult> {
    check_nonempty(a)?;
    t.check_universe(a.cols(), "column")?;
    check_cardinality(numerical_rank(a, tol), t.len())?;
    column_block_unchecked(a, t, tol)
}

/// `column_block` with the rank already known to equal `|T|`.
pub(crate) fn column_block_unchecked(
    a: &DenseMatrix,
    t: &IndexSet,
    tol: &ToleranceConfig,
) -> Result<GinvResult> {
    let hat = a.select_cols(t.indices());
    let pinv = full_column_rank_pinv(&hat, tol)?;
    let all_rows = IndexSet::full(a.rows());
    let mut h = DenseMatrix::zeros(a.cols(), a.rows());
    h.scatter(t.indices(), all_rows.indices(), &pinv);
    Ok(GinvResult::assemble(h, GinvKind::Ah, all_rows, t.clone(), tol))
}

/// Transpose of `column_block(Aᵀ, S)`: nonzero only in columns `S`, and
/// satisfies `AHA = A`, `HAH = H` and `(HA)ᵀ = HA`.
pub fn row_block(a: &DenseMatrix, s: &IndexSet, tol: &ToleranceConfig) -> Result<GinvResult> {
    let inner = column_block(&a.transpose(), s, tol)?;
    Ok(transpose_result(inner, GinvKind::Ha))
}

pub(crate) fn transpose_result(inner: GinvResult, kind: GinvKind) -> GinvResult {
    GinvResult {
        h: inner.h.transpose(),
        kind,
        s: inner.t,
        t: inner.s,
        one_norm: inner.one_norm,
        nnz: inner.nnz,
        trace: inner.trace,
        anchor_rows: inner.anchor_cols,
        anchor_cols: inner.anchor_rows,
        sweep_limit_exceeded: inner.sweep_limit_exceeded,
    }
}

/// `H` zero except `H[T,S] = A[S,T]⁻¹`.
pub fn general_block(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &IndexSet,
    tol: &ToleranceConfig,
) -> Result<GinvResult> {
    check_nonempty(a)?;
    s.check_universe(a.rows(), "row")?;
    t.check_universe(a.cols(), "column")?;
    let r = numerical_rank(a, tol);
    check_cardinality(r, s.len())?;
    check_cardinality(r, t.len())?;
    general_block_unchecked(a, s, t, tol)
}

pub(crate) fn general_block_unchecked(
    a: &DenseMatrix,
    s: &IndexSet,
    t: &IndexSet,
    tol: &ToleranceConfig,
) -> Result<GinvResult> {
    let inv = block_inverse(&a.submatrix(s.indices(), t.indices()))?;
    let mut h = DenseMatrix::zeros(a.cols(), a.rows());
    h.scatter(t.indices(), s.indices(), &inv);
    Ok(GinvResult::assemble(h, GinvKind::General, s.clone(), t.clone(), tol))
}

/// Column block over the column `â` minimizing `‖â⁺‖₁ = ‖â‖₁ / ‖â‖₂²`, for
/// rank-one `A`. Ties go to the lowest column index.
pub fn rank1_column(a: &DenseMatrix, tol: &ToleranceConfig) -> Result<GinvResult> {
    check_nonempty(a)?;
    let r = numerical_rank(a, tol);
    if r != 1 {
        return Err(Error::WrongRank { expected: 1, got: r });
    }
    let norms: Vec<(f64, f64)> = (0..a.cols())
        .map(|j| {
            let col = a.column(j);
            let l1: f64 = col.iter().map(|v| v.abs()).sum();
            let l2sq: f64 = col.iter().map(|v| v * v).sum();
            (l1, l2sq)
        })
        .collect();
    let biggest = norms.iter().map(|n| n.1).fold(0.0, f64::max);
    let cutoff = biggest * tol.rank_rel_tol * tol.rank_rel_tol;
    let mut best: Option<(usize, f64)> = None;
    for (j, &(l1, l2sq)) in norms.iter().enumerate() {
        if l2sq <= cutoff {
            continue;
        }
        let value = l1 / l2sq;
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((j, value));
        }
    }
    let (j, _) = best.ok_or(Error::ZeroMatrix)?;
    column_block_unchecked(a, &IndexSet::new(vec![j], a.cols())?, tol)
}
