//! Inconsistency indices.
//!
//! The spanning-tree indices compare every tree-induced priority vector with the EAST
//! vector: MII averages the Manhattan distances between the vectors, KII the Kendall
//! tau distances between the rankings they induce. The six classical indices (CI, GCI,
//! HCI, Koczkodaj, Golden-Wang and relative error) are defined on complete matrices only.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ComparisonGraph, DEFAULT_TREE_CAP};
use crate::matrix::PcMatrix;
use crate::weights::{evm_weights, gmm_weights, tree_log_weights, WeightVector};

/// Relative gap below which two weights share a rank.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Averaged Manhattan distance `sum |v_i - w_i| / n`.
pub fn amd(v: &[f64], w: &[f64]) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: v.len(),
            right: w.len(),
        });
    }
    if v.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = v.iter().zip(w).map(|(a, b)| (a - b).abs()).sum();
    Ok(total / v.len() as f64)
}

/// Ranking positions, 1 for the best alternative; ties share a rank and ranks are dense.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrderVector(Vec<usize>);

impl OrderVector {
    /// Accepts any rank list whose used values are exactly `1..=k`.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let k = ranks.iter().copied().max().unwrap_or(0);
        let dense = (1..=k).all(|r| ranks.contains(&r)) && ranks.iter().all(|&r| r >= 1);
        if dense {
            Ok(Self(ranks))
        } else {
            Err(Error::InvalidConfig(format!("ranks {ranks:?} are not dense")))
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for OrderVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(";"))
    }
}

/// Dense ranking of `w`, largest first. Neighbours in sorted order whose relative
/// difference is at most `tie_tol` share a rank.
pub fn order_vector(w: &[f64], tie_tol: f64) -> OrderVector {
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; w.len()];
    let mut rank = 0;
    let mut prev: Option<f64> = None;
    for &i in &idx {
        let x = w[i];
        let tied = prev.is_some_and(|p| (p - x).abs() <= tie_tol * p.abs().max(x.abs()));
        if !tied {
            rank += 1;
        }
        ranks[i] = rank;
        prev = Some(x);
    }
    OrderVector(ranks)
}

/// Number of pairs ordered oppositely by `p` and `q`, or tied in exactly one of them.
pub fn kendall_tau(p: &OrderVector, q: &OrderVector) -> Result<usize> {
    let (p, q) = (&p.0, &q.0);
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i].cmp(&p[j]) != q[i].cmp(&q[j]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Weight vector used by the Golden-Wang index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GwWeights {
    #[default]
    Gmm,
    Evm,
}

/// Prefactor of the geometric consistency index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GciNormalization {
    /// `2 / ((n-1)(n-2))`, the Aguarón-Moreno form. Reproduces GCI = 0.019 on the
    /// four-alternative reference matrix.
    #[default]
    AguaronMoreno,
    /// `2 / (n-2)`.
    AsPrinted,
}

impl GciNormalization {
    fn factor(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Self::AguaronMoreno => 2.0 / ((n - 1.0) * (n - 2.0)),
            Self::AsPrinted => 2.0 / (n - 2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalConfig {
    pub gw_weights: GwWeights,
    pub gci: GciNormalization,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexConfig {
    pub tree_cap: u64,
    pub tie_tol: f64,
    pub classical: ClassicalConfig,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            tree_cap: DEFAULT_TREE_CAP,
            tie_tol: DEFAULT_TIE_TOL,
            classical: ClassicalConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalIndices {
    pub ci: f64,
    pub gci: f64,
    pub hci: f64,
    #[serde(rename = "k")]
    pub koczkodaj: f64,
    pub gw: f64,
    pub re: f64,
}

/// Saaty's CI, GCI, HCI, Koczkodaj's index, Golden-Wang and relative error.
pub fn classical_indices(m: &PcMatrix, cfg: &ClassicalConfig) -> Result<ClassicalIndices> {
    m.require_complete()?;
    let n = m.n();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let nf = n as f64;
    let eigen = evm_weights(m)?;
    let gmm = gmm_weights(m)?;

    let ci = (eigen.lambda_max - nf) / (nf - 1.0);

    let col_sums: Vec<f64> = (0..n).map(|j| (0..n).map(|i| m.at(i, j)).sum()).collect();

    let w = match cfg.gw_weights {
        GwWeights::Gmm => &gmm,
        GwWeights::Evm => &eigen.vector,
    };
    let mut gw = 0.0;
    for i in 0..n {
        for j in 0..n {
            gw += (m.at(i, j) / col_sums[j] - w[i]).abs();
        }
    }
    gw /= nf;

    let mut koczkodaj: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let path = m.at(i, j) * m.at(j, k);
                let direct = m.at(i, k);
                let t = (1.0 - direct / path).abs().min((1.0 - path / direct).abs());
                koczkodaj = koczkodaj.max(t);
            }
        }
    }

    let row_log_means: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| m.at(i, k).ln()).sum::<f64>() / nf)
        .collect();
    let mut explained = 0.0;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            explained += (row_log_means[i] - row_log_means[j]).powi(2);
            total += m.at(i, j).ln().powi(2);
        }
    }
    // All-ones matrix: 0/0, which is consistent.
    let re = if total == 0.0 { 0.0 } else { 1.0 - explained / total };

    let mut log_sq = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            log_sq += (m.at(i, j) * gmm[j] / gmm[i]).ln().powi(2);
        }
    }
    let gci = cfg.gci.factor(n) * log_sq;

    let inv_sum: f64 = col_sums.iter().map(|s| 1.0 / s).sum();
    let hci = (1.0 / inv_sum - 1.0) * (nf + 1.0) / (nf - 1.0);

    Ok(ClassicalIndices {
        ci,
        gci,
        hci,
        koczkodaj,
        gw,
        re,
    })
}

/// Per-tree aggregates over all spanning trees of the induced graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeScores {
    pub tree_count: u64,
    pub east: WeightVector,
    pub mii: f64,
    /// Sum of the per-tree Kendall distances; KII is this over `tree_count`.
    pub kendall_total: u64,
}

impl TreeScores {
    pub fn kii(&self) -> f64 {
        self.kendall_total as f64 / self.tree_count as f64
    }

    pub fn almost_consistent(&self) -> bool {
        self.kendall_total == 0
    }
}

/// Two passes over the spanning trees: the first builds the EAST vector, the second
/// measures each tree against it.
pub fn tree_scores(m: &PcMatrix, cap: u64, tie_tol: f64) -> Result<TreeScores> {
    let graph = ComparisonGraph::induced_by(m);
    let tree_count = graph.check_enumerable(cap)?;

    let mut log_sum = vec![0.0; m.n()];
    for tree in graph.spanning_trees(cap)? {
        for (s, l) in log_sum.iter_mut().zip(tree_log_weights(&tree, m)?) {
            *s += l;
        }
    }
    let mean: Vec<f64> = log_sum.iter().map(|s| s / tree_count as f64).collect();
    let east = WeightVector::from_log(&mean);
    let east_order = order_vector(east.as_slice(), tie_tol);

    let mut amd_total = 0.0;
    let mut kendall_total = 0u64;
    for tree in graph.spanning_trees(cap)? {
        let w = WeightVector::from_log(&tree_log_weights(&tree, m)?);
        amd_total += amd(east.as_slice(), w.as_slice())?;
        kendall_total += kendall_tau(&east_order, &order_vector(w.as_slice(), tie_tol))? as u64;
    }
    Ok(TreeScores {
        tree_count,
        east,
        mii: amd_total / tree_count as f64,
        kendall_total,
    })
}

/// Manhattan inconsistency index.
pub fn mii(m: &PcMatrix, cfg: &IndexConfig) -> Result<f64> {
    Ok(tree_scores(m, cfg.tree_cap, cfg.tie_tol)?.mii)
}

/// Kendall inconsistency index.
pub fn kii(m: &PcMatrix, cfg: &IndexConfig) -> Result<f64> {
    Ok(tree_scores(m, cfg.tree_cap, cfg.tie_tol)?.kii())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub n: usize,
    pub complete: bool,
    pub tree_count: u64,
    pub mii: f64,
    pub kii: f64,
    pub almost_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalIndices>,
}

/// MII, KII and, for complete matrices with at least three alternatives, the classical
/// indices.
pub fn analyze(m: &PcMatrix, cfg: &IndexConfig) -> Result<IndexReport> {
    let scores = tree_scores(m, cfg.tree_cap, cfg.tie_tol)?;
    let complete = m.is_complete();
    let classical = if complete && m.n() >= 3 {
        Some(classical_indices(m, &cfg.classical)?)
    } else {
        None
    };
    Ok(IndexReport {
        n: m.n(),
        complete,
        tree_count: scores.tree_count,
        mii: scores.mii,
        kii: scores.kii(),
        almost_consistent: scores.almost_consistent(),
        classical,
    })
}
