//! Priority vectors: eigenvector method, geometric mean method, the vector induced by a
//! single spanning tree and the geometric mean over all spanning trees (EAST).

use std::collections::VecDeque;
use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ComparisonGraph, SpanningTree};
use crate::matrix::PcMatrix;

/// Power iteration stops once successive eigenvalue estimates differ by less than this.
pub const EVM_TOLERANCE: f64 = 1e-12;
pub const EVM_MAX_ITERATIONS: usize = 10_000;

/// Positive priority vector, normalized to unit sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Normalizes `w` to unit sum. Every component must be positive and finite.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some(i) = w.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::InvalidEntry {
                row: i + 1,
                col: 1,
                message: format!("weight {} is not positive", w[i]),
            });
        }
        let sum: f64 = w.iter().sum();
        Ok(Self(w.into_iter().map(|x| x / sum).collect()))
    }

    /// Normalized vector from natural logarithms of unnormalized weights.
    pub fn from_log(log_w: &[f64]) -> Self {
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_w.iter().map(|&l| (l - max).exp()).collect();
        let sum: f64 = w.iter().sum();
        Self(w.into_iter().map(|x| x / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub lambda_max: f64,
    pub vector: WeightVector,
    pub iterations: usize,
}

/// Principal eigenpair by power iteration from the uniform vector, rescaling by the
/// largest component each step.
pub fn evm_weights(m: &PcMatrix) -> Result<EigenResult> {
    m.require_complete()?;
    let n = m.n();
    let mut w = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut lambda = f64::NAN;
    for iteration in 1..=EVM_MAX_ITERATIONS {
        for (i, out) in next.iter_mut().enumerate() {
            *out = (0..n).map(|j| m.at(i, j) * w[j]).sum();
        }
        let estimate = next.iter().copied().fold(0.0, f64::max);
        for (wi, &x) in w.iter_mut().zip(&next) {
            *wi = x / estimate;
        }
        if (estimate - lambda).abs() < EVM_TOLERANCE {
            return Ok(EigenResult {
                lambda_max: estimate,
                vector: WeightVector::new(w)?,
                iterations: iteration,
            });
        }
        lambda = estimate;
    }
    Err(Error::NonConvergence {
        iterations: EVM_MAX_ITERATIONS,
    })
}

/// Normalized row geometric means.
pub fn gmm_weights(m: &PcMatrix) -> Result<WeightVector> {
    m.require_complete()?;
    let n = m.n();
    let logs: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| m.at(i, j).ln()).sum::<f64>() / n as f64)
        .collect();
    Ok(WeightVector::from_log(&logs))
}

/// Unnormalized log-weights with `w_0 = 1` and `w_i / w_j = m_ij` along tree edges.
pub(crate) fn tree_log_weights(tree: &SpanningTree, m: &PcMatrix) -> Result<Vec<f64>> {
    let n = m.n();
    if tree.n() != n {
        return Err(Error::LengthMismatch {
            left: tree.n(),
            right: n,
        });
    }
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j) in tree.edges() {
        let ratio = m.get(i, j).ok_or(Error::EdgeNotInMatrix(i + 1, j + 1))?;
        let log_ratio = ratio.ln();
        adjacency[i].push((j, -log_ratio));
        adjacency[j].push((i, log_ratio));
    }
    let mut log_w = vec![f64::NAN; n];
    log_w[0] = 0.0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(u, step) in &adjacency[v] {
            if log_w[u].is_nan() {
                log_w[u] = log_w[v] + step;
                queue.push_back(u);
            }
        }
    }
    Ok(log_w)
}

/// The vector induced by one spanning tree, rooted at the first alternative.
pub fn tree_weights(tree: &SpanningTree, m: &PcMatrix) -> Result<WeightVector> {
    Ok(WeightVector::from_log(&tree_log_weights(tree, m)?))
}

/// Normalized componentwise geometric mean of all tree-induced vectors.
pub fn gmt_weights(m: &PcMatrix, cap: u64) -> Result<WeightVector> {
    let graph = ComparisonGraph::induced_by(m);
    let mut sum = vec![0.0; m.n()];
    let mut count = 0u64;
    for tree in graph.spanning_trees(cap)? {
        let log_w = tree_log_weights(&tree, m)?;
        for (s, l) in sum.iter_mut().zip(&log_w) {
            *s += l;
        }
        count += 1;
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / count as f64).collect();
    Ok(WeightVector::from_log(&mean))
}
