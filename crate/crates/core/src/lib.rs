//! Sparse reflexive generalized inverses.
//!
//! Block constructions over well-chosen submatrices, determinant local
//! search to choose them, 1-norm minimizing LPs as baselines, and dual
//! certificates that bound the quality of a block solution at runtime.

pub mod blocks;
pub mod error;
pub mod families;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use blocks::{GinvKind, GinvResult, IndexSet};
pub use linalg::{DenseMatrix, ToleranceConfig};
pub use search::SearchConfig;
