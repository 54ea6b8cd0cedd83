//! Structured tensor classes (B, doubly-B, Z and diagonal dominance), their
//! decompositions, and localization of H-eigenvalues by row intervals.
//!
//! Tensors are dense and row-major; indices are 0-based in the API and
//! 1-based in JSON files and reports.

pub mod classes;
pub mod decompose;
pub mod eigenloc;
pub mod error;
pub mod hypergraph;
pub mod interval;
pub mod json;
pub mod oracle;
pub mod poly;
pub mod tensor;

pub use classes::{classify, ClassReport, TensorClass, Witness};
pub use decompose::{decompose_b, decompose_doubly_b, Decomposition, DecompositionKind};
pub use eigenloc::{definiteness, DefinitenessVerdict, Verdict};
pub use error::{Error, Result};
pub use hypergraph::{laplacian_bounds, laplacian_tensor, Hypergraph};
pub use interval::{Interval, IntervalUnion};
pub use oracle::{eigen_search, eigenpairs_n2, residual, EigenPair};
pub use tensor::{contract, polyeval, row_stats, IndexSet, RowStats, Tensor};
