//! Monte Carlo comparison of the eight indices on random complete matrices.
//!
//! Series 1 holds consistent matrices built from random vectors; series `s >= 2`
//! multiplies every upper-triangle entry of a fresh consistent matrix by an independent
//! factor drawn from `[1/s, s]` and rebuilds the lower triangle by reciprocity.
//!
//! Every matrix draws from its own ChaCha8 stream: the generator is seeded with the
//! study seed and switched to stream `(series << 32) | matrix`. Results therefore do
//! not depend on how the work is scheduled across threads.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{classical_indices, tree_scores, IndexConfig};
use crate::matrix::PcMatrix;

/// Column order used by every per-index array in this module.
pub const INDEX_NAMES: [&str; 8] = ["ci", "gci", "hci", "k", "gw", "re", "mii", "kii"];
pub const GW: usize = 4;
pub const MII: usize = 6;

/// Distribution of the perturbation factor on `[1/s, s]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Perturbation {
    /// `exp(U(-ln s, ln s))`: a factor and its reciprocal are equally likely.
    #[default]
    LogUniform,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesConfig {
    pub n: usize,
    pub matrices_per_series: usize,
    pub series_count: usize,
    pub seed: u64,
    /// Generating-vector components are drawn log-uniformly from this interval.
    pub weight_range: (f64, f64),
    pub perturbation: Perturbation,
    pub indices: IndexConfig,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            n: 5,
            matrices_per_series: 1000,
            series_count: 30,
            seed: 20_190_101,
            weight_range: (1.0 / 9.0, 9.0),
            perturbation: Perturbation::LogUniform,
            indices: IndexConfig::default(),
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.weight_range;
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!(
                "matrix size {} is below 3, the classical indices are undefined",
                self.n
            )));
        }
        if self.matrices_per_series == 0 || self.series_count == 0 {
            return Err(Error::InvalidConfig(
                "series and matrix counts must be at least 1".into(),
            ));
        }
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::InvalidConfig(format!("bad weight range [{lo}, {hi}]")));
        }
        Ok(())
    }
}

/// Generator for matrix `matrix` of series `series` (both 1-based).
pub fn child_rng(seed: u64, series: usize, matrix: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((series as u64) << 32) | matrix as u64);
    rng
}

/// Consistent matrix `m_ij = v_i / v_j` with `v` log-uniform on `range`.
pub fn generate_consistent<R: Rng + ?Sized>(n: usize, range: (f64, f64), rng: &mut R) -> Result<PcMatrix> {
    let (lo, hi) = (range.0.ln(), range.1.ln());
    let v: Vec<f64> = (0..n)
        .map(|_| {
            if lo < hi {
                rng.random_range(lo..hi).exp()
            } else {
                lo.exp()
            }
        })
        .collect();
    PcMatrix::from_weights(&v)
}

/// Multiplies each upper-triangle entry by an independent factor from `[1/spread, spread]`.
///
/// `spread <= 1` is the identity and draws nothing from `rng`.
pub fn perturb<R: Rng + ?Sized>(m: &PcMatrix, spread: f64, dist: Perturbation, rng: &mut R) -> Result<PcMatrix> {
    m.require_complete()?;
    if spread <= 1.0 {
        return Ok(m.clone());
    }
    let log_s = spread.ln();
    PcMatrix::from_upper(m.n(), |i, j| {
        let factor = match dist {
            Perturbation::LogUniform => rng.random_range(-log_s..=log_s).exp(),
            Perturbation::Uniform => rng.random_range(1.0 / spread..=spread),
        };
        m.get(i, j).map(|x| x * factor)
    })
}

/// The matrix scored as matrix `matrix` of series `series`.
pub fn study_matrix(cfg: &SeriesConfig, series: usize, matrix: usize) -> Result<PcMatrix> {
    let mut rng = child_rng(cfg.seed, series, matrix);
    let base = generate_consistent(cfg.n, cfg.weight_range, &mut rng)?;
    perturb(&base, series as f64, cfg.perturbation, &mut rng)
}

/// All eight indices of a complete matrix, in [`INDEX_NAMES`] order.
pub fn score_matrix(m: &PcMatrix, cfg: &IndexConfig) -> Result<[f64; 8]> {
    let c = classical_indices(m, &cfg.classical)?;
    let t = tree_scores(m, cfg.tree_cap, cfg.tie_tol)?;
    Ok([c.ci, c.gci, c.hci, c.koczkodaj, c.gw, c.re, t.mii, t.kii()])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixScores {
    pub series: usize,
    pub matrix: usize,
    pub values: [f64; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesStats {
    pub series_index: usize,
    pub means: [f64; 8],
    /// Pearson correlations between indices; `None` where an index is constant.
    pub correlation: [[Option<f64>; 8]; 8],
}

impl SeriesStats {
    pub fn from_scores(series_index: usize, scores: &[[f64; 8]]) -> Self {
        let count = scores.len() as f64;
        let mut means = [0.0; 8];
        for row in scores {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= count);

        let columns: Vec<Vec<f64>> = (0..8).map(|k| scores.iter().map(|r| r[k]).collect()).collect();
        let mut correlation = [[None; 8]; 8];
        for a in 0..8 {
            for b in a..8 {
                let r = pearson(&columns[a], &columns[b]).ok();
                correlation[a][b] = r;
                correlation[b][a] = r;
            }
        }
        Self {
            series_index,
            means,
            correlation,
        }
    }

    pub fn r_gw_mii(&self) -> Option<f64> {
        self.correlation[GW][MII]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub records: Vec<MatrixScores>,
    pub series: Vec<SeriesStats>,
}

/// Runs every series on the current rayon pool.
pub fn run_study(cfg: &SeriesConfig) -> Result<Study> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.series_count * cfg.matrices_per_series);
    let mut series = Vec::with_capacity(cfg.series_count);
    for s in 1..=cfg.series_count {
        let values = (1..=cfg.matrices_per_series)
            .into_par_iter()
            .map(|k| {
                study_matrix(cfg, s, k)
                    .and_then(|m| score_matrix(&m, &cfg.indices))
                    .map_err(|e| Error::Study {
                        series: s,
                        matrix: k,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<[f64; 8]>>>()?;
        series.push(SeriesStats::from_scores(s, &values));
        records.extend(values.into_iter().enumerate().map(|(k, values)| MatrixScores {
            series: s,
            matrix: k + 1,
            values,
        }));
    }
    Ok(Study { records, series })
}

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn csv_error(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// One row per matrix: `series,matrix,ci,gci,hci,k,gw,re,mii,kii`.
pub fn write_records_csv<W: Write>(records: &[MatrixScores], precision: usize, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["series", "matrix"];
    header.extend(INDEX_NAMES);
    w.write_record(&header).map_err(csv_error)?;
    for r in records {
        let mut row = vec![r.series.to_string(), r.matrix.to_string()];
        row.extend(r.values.iter().map(|v| format!("{v:.precision$}")));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()
}

/// One row per series: the eight means and `r(gw, mii)` (empty when undefined).
pub fn write_summary_csv<W: Write>(series: &[SeriesStats], precision: usize, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["series".to_string()];
    header.extend(INDEX_NAMES.iter().map(|n| format!("mean_{n}")));
    header.push("r_gw_mii".to_string());
    w.write_record(&header).map_err(csv_error)?;
    for s in series {
        let mut row = vec![s.series_index.to_string()];
        row.extend(s.means.iter().map(|v| format!("{v:.precision$}")));
        row.push(s.r_gw_mii().map(|r| format!("{r:.precision$}")).unwrap_or_default());
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()
}
