//! Pairwise comparison matrices: construction, the `.pcm` text format, validation and
//! the triad consistency test.
//!
//! A [`PcMatrix`] is always reciprocal with a unit diagonal; every constructor enforces
//! that. Raw input that may violate those invariants goes through [`RawMatrix`] first,
//! which reports problems instead of failing on the first one.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;

/// Relative tolerance used when checking `m_ij * m_ji = 1` on input.
pub const RECIPROCITY_TOL: f64 = 1e-9;

/// Default relative tolerance of [`PcMatrix::is_consistent`].
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Square reciprocal matrix of positive ratios, possibly with missing comparisons.
///
/// Entries are stored row-major; `None` marks a missing comparison. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct PcMatrix {
    n: usize,
    entries: Vec<Option<f64>>,
}

impl PcMatrix {
    /// Builds a matrix from its strict upper triangle. `upper(i, j)` is queried for
    /// `i < j`; the lower triangle is filled by reciprocity.
    pub fn from_upper<F>(n: usize, mut upper: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Option<f64>,
    {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = vec![None; n * n];
        for i in 0..n {
            entries[i * n + i] = Some(1.0);
            for j in i + 1..n {
                if let Some(x) = upper(i, j) {
                    check_ratio(x, i, j)?;
                    entries[i * n + j] = Some(x);
                    entries[j * n + i] = Some(1.0 / x);
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Complete matrix from its upper triangle given as a dense grid (only `i < j` is read).
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NotSquare {
                row: row + 1,
                found: r.len(),
                expected: n,
            });
        }
        Self::from_upper(n, |i, j| Some(rows[i][j]))
    }

    /// The consistent matrix `m_ij = v_i / v_j`.
    pub fn from_weights(v: &[f64]) -> Result<Self> {
        if let Some(i) = v.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::InvalidEntry {
                row: i + 1,
                col: i + 1,
                message: format!("generating weight {} is not positive", v[i]),
            });
        }
        Self::from_upper(v.len(), |i, j| Some(v[i] / v[j]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based; `None` when missing.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i * self.n + j]
    }

    /// Entry `(i, j)` of a matrix known to be complete.
    pub(crate) fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j].expect("complete matrix")
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Incomplete)
        }
    }

    /// Number of known comparisons above the diagonal.
    pub fn known_pairs(&self) -> usize {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j).is_some())
            .count()
    }

    /// Copy with the comparison `{i, j}` removed (both triangles).
    pub fn without(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        if i != j {
            out.entries[i * self.n + j] = None;
            out.entries[j * self.n + i] = None;
        }
        out
    }

    /// Relabels alternatives: alternative `i` of `self` becomes `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut entries = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Self { n, entries }
    }

    /// True iff every fully known triad satisfies `|m_ij m_jk m_ki - 1| <= tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let Some(a) = self.get(i, j) else { continue };
                for k in j + 1..n {
                    let (Some(b), Some(c)) = (self.get(j, k), self.get(k, i)) else {
                        continue;
                    };
                    if (a * b * c - 1.0).abs() > tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            complete: self.is_complete(),
            connected: ComparisonGraph::induced_by(self).is_connected(),
            violations: Vec::new(),
        }
    }

    /// Serializes to the `.pcm` text format.
    ///
    /// Ratios `>= 1` are written with 6 significant digits, ratios below 1 as `1/x`
    /// with `x` to 6 significant digits, so the reciprocal pair stays exact on re-read.
    pub fn to_pcm_string(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format_entry(self.get(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for PcMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pcm_string())
    }
}

impl FromStr for PcMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}

fn check_ratio(x: f64, i: usize, j: usize) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEntry {
            row: i + 1,
            col: j + 1,
            message: format!("ratio {x} is not a positive finite number"),
        })
    }
}

fn sig6(x: f64) -> String {
    let rounded: f64 = format!("{x:.5e}").parse().expect("float round trip");
    format!("{rounded}")
}

fn format_entry(entry: Option<f64>) -> String {
    match entry {
        None => "?".to_string(),
        Some(x) if x >= 1.0 => sig6(x),
        Some(x) => format!("1/{}", sig6(1.0 / x)),
    }
}

/// A problem found in raw input. Coordinates are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}): {}", self.row, self.col, self.description)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub complete: bool,
    pub connected: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A parsed grid of tokens before the reciprocity and diagonal checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    n: usize,
    cells: Vec<Option<f64>>,
}

impl RawMatrix {
    /// Parses whitespace-separated rows. Tokens are positive decimals, fractions `a/b`,
    /// or `?`. Everything after `#` on a line is ignored, as are blank lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<Option<f64>>)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    parse_token(tok).map_err(|message| Error::Syntax {
                        line: lineno + 1,
                        message,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((lineno + 1, row));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut cells = Vec::with_capacity(n * n);
        for (idx, (_, row)) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: idx + 1,
                    found: row.len(),
                    expected: n,
                });
            }
            cells.extend(row);
        }
        Ok(Self { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn cell(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.n + j]
    }

    /// True when every strict-lower cell is `?`: the lower triangle is then derived
    /// from the upper one instead of being checked.
    pub fn upper_only(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.cell(i, j).is_none()))
    }

    fn violations(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            match self.cell(i, i) {
                Some(d) if (d - 1.0).abs() <= RECIPROCITY_TOL => {}
                Some(d) => out.push(Violation {
                    row: i + 1,
                    col: i + 1,
                    description: format!("diagonal entry is {d}, expected 1"),
                }),
                None => out.push(Violation {
                    row: i + 1,
                    col: i + 1,
                    description: "diagonal entry is missing".to_string(),
                }),
            }
        }
        if self.upper_only() {
            return out;
        }
        for i in 0..n {
            for j in i + 1..n {
                match (self.cell(i, j), self.cell(j, i)) {
                    (Some(a), Some(b)) => {
                        if (a * b - 1.0).abs() > RECIPROCITY_TOL {
                            out.push(Violation {
                                row: j + 1,
                                col: i + 1,
                                description: format!(
                                    "reciprocity violated: m{}{} = {a} but m{}{} = {b}, expected {}",
                                    i + 1,
                                    j + 1,
                                    j + 1,
                                    i + 1,
                                    1.0 / a
                                ),
                            });
                        }
                    }
                    (Some(_), None) => out.push(Violation {
                        row: j + 1,
                        col: i + 1,
                        description: format!("missing while m{}{} is known", i + 1, j + 1),
                    }),
                    (None, Some(_)) => out.push(Violation {
                        row: i + 1,
                        col: j + 1,
                        description: format!("missing while m{}{} is known", j + 1, i + 1),
                    }),
                    (None, None) => {}
                }
            }
        }
        out
    }

    /// Upper-triangle view used both for building and for connectivity.
    fn upper(&self, i: usize, j: usize) -> Option<f64> {
        self.cell(i, j)
    }

    pub fn validate(&self) -> ValidationReport {
        let violations = self.violations();
        let complete = self.cells.iter().all(Option::is_some) || {
            // Upper-only input is complete when its upper triangle is.
            self.upper_only() && (0..self.n).all(|i| (i + 1..self.n).all(|j| self.upper(i, j).is_some()))
        };
        let connected = ComparisonGraph::from_pairs(
            self.n,
            (0..self.n)
                .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
                .filter(|&(i, j)| self.upper(i, j).is_some()),
        )
        .is_connected();
        ValidationReport {
            complete,
            connected,
            violations,
        }
    }

    /// Converts to a [`PcMatrix`], failing on the first violation.
    pub fn into_matrix(self) -> Result<PcMatrix> {
        if let Some(v) = self.violations().into_iter().next() {
            return Err(Error::InvalidEntry {
                row: v.row,
                col: v.col,
                message: v.description,
            });
        }
        PcMatrix::from_upper(self.n, |i, j| self.upper(i, j))
    }
}

fn parse_positive(tok: &str) -> std::result::Result<f64, String> {
    let x: f64 = tok.parse().map_err(|_| format!("`{tok}` is not a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{tok}` is not a positive finite number"))
    }
}

fn parse_token(tok: &str) -> std::result::Result<Option<f64>, String> {
    if tok == "?" {
        return Ok(None);
    }
    match tok.split_once('/') {
        Some((num, den)) => {
            let num = parse_positive(num)?;
            let den = parse_positive(den)?;
            Ok(Some(num / den))
        }
        None => parse_positive(tok).map(Some),
    }
}

/// Parses `.pcm` text into a validated matrix.
pub fn parse_matrix(text: &str) -> Result<PcMatrix> {
    RawMatrix::parse(text)?.into_matrix()
}
