//! Inconsistency indices for complete and incomplete pairwise comparison matrices.
//!
//! Every spanning tree of the comparison graph induced by a matrix determines a unique
//! priority vector. Comparing those vectors with their geometric mean (the EAST vector)
//! yields two indices that need no matrix completion:
//!
//! - MII, the mean averaged-Manhattan distance, zero exactly for consistent matrices;
//! - KII, the mean Kendall tau distance between the induced rankings.
//!
//! The crate also provides the eigenvector and geometric mean priority methods, six
//! classical indices for complete matrices, and a reproducible Monte Carlo study.
//!
//! ```
//! use pcmtree::{analyze, parse_matrix, IndexConfig};
//!
//! let m = parse_matrix("1 2 ? 1/6\n1/2 1 5 1\n? 1/5 1 ?\n6 1 ? 1").unwrap();
//! let report = analyze(&m, &IndexConfig::default()).unwrap();
//! assert_eq!(report.tree_count, 3);
//! assert_eq!(report.kii, 2.0);
//! ```

pub mod cli;
pub mod error;
pub mod graph;
pub mod indices;
pub mod matrix;
pub mod montecarlo;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{ComparisonGraph, LaplacianMatrix, SpanningTree, DEFAULT_TREE_CAP};
pub use indices::{
    amd, analyze, classical_indices, kendall_tau, kii, mii, order_vector, ClassicalConfig, ClassicalIndices,
    GciNormalization, GwWeights, IndexConfig, IndexReport, OrderVector,
};
pub use matrix::{parse_matrix, PcMatrix, RawMatrix, ValidationReport};
pub use weights::{evm_weights, gmm_weights, gmt_weights, tree_weights, EigenResult, WeightVector};
