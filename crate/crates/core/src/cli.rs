//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain or validation failures, 2 on usage errors.

use std::fs::File;
use std::io::{BufWriter, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::graph::{ComparisonGraph, DEFAULT_TREE_CAP};
use crate::indices::{analyze, ClassicalConfig, GciNormalization, GwWeights, IndexConfig, DEFAULT_TIE_TOL};
use crate::matrix::{PcMatrix, RawMatrix};
use crate::montecarlo::{run_study, write_records_csv, write_summary_csv, Perturbation, SeriesConfig};
use crate::weights::{evm_weights, gmm_weights, gmt_weights};

/// Environment variable overriding the spanning tree enumeration cap.
pub const TREE_CAP_ENV: &str = "PCM_TREE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "pcmtree",
    version,
    about = "Spanning-tree inconsistency indices for pairwise comparison matrices"
)]
struct Cli {
    /// Decimal places for numeric output.
    #[arg(long, global = true, default_value_t = 5)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute MII, KII and (for complete matrices) the classical indices.
    Analyze {
        /// Matrix file, or `-` for stdin.
        input: String,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = GciArg::AguaronMoreno)]
        gci_normalization: GciArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Gmm)]
        gw_weights: MethodArg,
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Print a normalized priority vector.
    Weights {
        input: String,
        #[arg(long, value_enum, default_value_t = WeightMethod::East)]
        method: WeightMethod,
        #[arg(long)]
        json: bool,
    },
    /// Count (and optionally list) spanning trees of the comparison graph.
    Trees {
        input: String,
        /// Print one tree per line as 1-based `i-j` edges.
        #[arg(long)]
        list: bool,
    },
    /// Run the Monte Carlo study.
    Simulate {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        per_series: usize,
        #[arg(long, default_value_t = 30)]
        series: usize,
        #[arg(long, default_value_t = SeriesConfig::default().seed)]
        seed: u64,
        /// Per-matrix CSV output path.
        #[arg(long)]
        out: Option<String>,
        /// Per-series summary CSV path; written to stdout when absent.
        #[arg(long)]
        summary: Option<String>,
        #[arg(long, value_enum, default_value_t = PerturbationArg::LogUniform)]
        perturbation: PerturbationArg,
        #[arg(long, default_value_t = 1.0 / 9.0)]
        weight_low: f64,
        #[arg(long, default_value_t = 9.0)]
        weight_high: f64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a matrix file for format, reciprocity and connectivity problems.
    Validate {
        input: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GciArg {
    AguaronMoreno,
    Printed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Gmm,
    Evm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightMethod {
    Evm,
    Gmm,
    East,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PerturbationArg {
    LogUniform,
    Uniform,
}

/// Streams used by one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult = Result<i32, Failure>;

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { io.stdout } else { io.stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, io) {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            let _ = writeln!(
                io.stderr,
                "usage: pcmtree <analyze|weights|trees|simulate|validate> [OPTIONS]"
            );
            2
        }
    }
}

fn tree_cap() -> Result<u64, Failure> {
    match std::env::var(TREE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{TREE_CAP_ENV}={v} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_TREE_CAP),
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Failure::Domain(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load_matrix(path: &str, stdin: &mut dyn Read) -> Result<PcMatrix, Failure> {
    let text = read_input(path, stdin)?;
    Ok(RawMatrix::parse(&text)?.into_matrix()?)
}

fn fmt_vec(w: &[f64], precision: usize) -> String {
    w.iter()
        .map(|x| format!("{x:.precision$}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> CliResult {
    let p = cli.precision;
    let out = &mut *io.stdout;
    match cli.command {
        Command::Analyze {
            input,
            json,
            gci_normalization,
            gw_weights,
            tie_tol,
        } => {
            let m = load_matrix(&input, io.stdin)?;
            let cfg = IndexConfig {
                tree_cap: tree_cap()?,
                tie_tol,
                classical: ClassicalConfig {
                    gw_weights: match gw_weights {
                        MethodArg::Gmm => GwWeights::Gmm,
                        MethodArg::Evm => GwWeights::Evm,
                    },
                    gci: match gci_normalization {
                        GciArg::AguaronMoreno => GciNormalization::AguaronMoreno,
                        GciArg::Printed => GciNormalization::AsPrinted,
                    },
                },
            };
            let report = analyze(&m, &cfg)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).map_err(|e| Failure::Domain(e.to_string()))?
                )?;
            } else {
                writeln!(out, "alternatives:      {}", report.n)?;
                writeln!(out, "complete:          {}", yes_no(report.complete))?;
                writeln!(out, "spanning trees:    {}", report.tree_count)?;
                writeln!(out, "almost consistent: {}", yes_no(report.almost_consistent))?;
                writeln!(out, "MII {:.p$}", report.mii)?;
                writeln!(out, "KII {:.p$}", report.kii)?;
                if let Some(c) = report.classical {
                    for (name, v) in [
                        ("CI", c.ci),
                        ("GCI", c.gci),
                        ("HCI", c.hci),
                        ("K", c.koczkodaj),
                        ("GW", c.gw),
                        ("RE", c.re),
                    ] {
                        writeln!(out, "{name:<3} {v:.p$}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Weights { input, method, json } => {
            let m = load_matrix(&input, io.stdin)?;
            let (w, lambda) = match method {
                WeightMethod::Evm => {
                    let r = evm_weights(&m)?;
                    (r.vector, Some(r.lambda_max))
                }
                WeightMethod::Gmm => (gmm_weights(&m)?, None),
                WeightMethod::East => (gmt_weights(&m, tree_cap()?)?, None),
            };
            if json {
                let mut obj = json!({ "method": format!("{method:?}").to_lowercase(), "weights": w });
                if let Some(l) = lambda {
                    obj["lambda_max"] = json!(l);
                }
                writeln!(out, "{obj}")?;
            } else {
                writeln!(out, "{}", fmt_vec(w.as_slice(), p))?;
                if let Some(l) = lambda {
                    writeln!(out, "lambda_max {l:.p$}")?;
                }
            }
            Ok(0)
        }
        Command::Trees { input, list } => {
            let m = load_matrix(&input, io.stdin)?;
            let g = ComparisonGraph::induced_by(&m);
            let count = if g.is_connected() {
                g.count_spanning_trees()
            } else {
                Default::default()
            };
            writeln!(out, "spanning trees: {count}")?;
            if list {
                for tree in g.spanning_trees(tree_cap()?)? {
                    writeln!(out, "{tree}")?;
                }
            }
            Ok(0)
        }
        Command::Simulate {
            n,
            per_series,
            series,
            seed,
            out: records_path,
            summary,
            perturbation,
            weight_low,
            weight_high,
            threads,
        } => {
            let cfg = SeriesConfig {
                n,
                matrices_per_series: per_series,
                series_count: series,
                seed,
                weight_range: (weight_low, weight_high),
                perturbation: match perturbation {
                    PerturbationArg::LogUniform => Perturbation::LogUniform,
                    PerturbationArg::Uniform => Perturbation::Uniform,
                },
                indices: IndexConfig {
                    tree_cap: tree_cap()?,
                    ..Default::default()
                },
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let study = match threads {
                Some(0) => return Err(Failure::Usage("--threads must be at least 1".into())),
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Failure::Domain(e.to_string()))?
                    .install(|| run_study(&cfg))?,
                None => run_study(&cfg)?,
            };
            if let Some(path) = records_path {
                let file = File::create(&path).map_err(|e| Failure::Domain(format!("{path}: {e}")))?;
                write_records_csv(&study.records, p, BufWriter::new(file))?;
            }
            match summary {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Failure::Domain(format!("{path}: {e}")))?;
                    write_summary_csv(&study.series, p, BufWriter::new(file))?;
                }
                None => write_summary_csv(&study.series, p, &mut *out)?,
            }
            Ok(0)
        }
        Command::Validate { input, json } => {
            let text = read_input(&input, io.stdin)?;
            let report = RawMatrix::parse(&text)?.validate();
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&report).map_err(|e| Failure::Domain(e.to_string()))?
                )?;
            } else {
                writeln!(out, "complete:  {}", yes_no(report.complete))?;
                writeln!(out, "connected: {}", yes_no(report.connected))?;
                for v in &report.violations {
                    writeln!(out, "violation {v}")?;
                }
            }
            if report.is_valid() {
                Ok(0)
            } else {
                for v in &report.violations {
                    writeln!(io.stderr, "error: {v}")?;
                }
                Ok(1)
            }
        }
    }
}
