//! Run specifications and the `run`, `compare` and `sweep` commands.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apps::{AppKind, LabelArray};
use crate::engine::report::{self, Summary};
use crate::engine::{self, EngineConfig, RunResult};
use crate::error::{EngineError, GraphError};
use crate::graph::{build_csc, load_edge_list, Graph};
use crate::rmat::{generate_rmat, RmatConfig, RmatProbabilities};
use crate::scheduler::{SchedulerKind, Threshold};
use crate::simt::KernelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    /// `src dst` per line.
    El,
    /// `src dst weight` per line.
    Wel,
    /// Binary CSR.
    Bin,
}

impl FileFormat {
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "el" => Some(FileFormat::El),
            "wel" => Some(FileFormat::Wel),
            "bin" => Some(FileFormat::Bin),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum InputSpec {
    Rmat {
        scale: u32,
        edge_factor: usize,
        probabilities: RmatProbabilities,
        max_weight: Option<u32>,
    },
    File { path: PathBuf, format: FileFormat },
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub name: String,
    pub input: InputSpec,
    pub symmetrize: bool,
    pub app: AppKind,
    pub scheduler: SchedulerKind,
    pub kernel: KernelConfig,
    pub devices: usize,
    pub seed: u64,
    pub max_rounds: Option<usize>,
    /// Report directory; nothing is written when absent.
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            scheduler: self.scheduler,
            kernel: self.kernel,
            devices: self.devices,
            max_rounds: self.max_rounds,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("labels differ: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Engine(e.into())
    }
}

impl CliError {
    /// 1 for failed assertions, 2 for usage, configuration and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) | CliError::Engine(EngineError::NonConvergence { .. }) => 1,
            _ => 2,
        }
    }
}

pub fn load_graph(spec: &RunSpec) -> Result<Graph, CliError> {
    let g = match &spec.input {
        InputSpec::Rmat {
            scale,
            edge_factor,
            probabilities,
            max_weight,
        } => {
            let mut cfg = RmatConfig::new(*scale, *edge_factor, spec.seed).with_probabilities(*probabilities);
            cfg.max_weight = *max_weight;
            generate_rmat(&cfg)?
        }
        InputSpec::File { path, format } => {
            let file = File::open(path)
                .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
            let reader = BufReader::new(file);
            match format {
                FileFormat::El => load_edge_list(reader, false)?,
                FileFormat::Wel => load_edge_list(reader, true)?,
                FileFormat::Bin => Graph::read_binary(reader)?,
            }
        }
    };
    let g = if spec.symmetrize { g.symmetrized() } else { g };
    Ok(build_csc(g))
}

pub fn execute(spec: &RunSpec, g: &Graph) -> Result<RunResult, CliError> {
    let mut app = spec.app.build()?;
    Ok(engine::run(g, app.as_mut(), &spec.engine_config())?)
}

/// Result of `run`.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub result: RunResult,
    pub summary: Summary,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn summary_line(&self, spec: &RunSpec) -> String {
        let s = &self.summary;
        let k = &s.kernel_launches;
        format!(
            "{} {} on {} device(s): {} rounds, {} edges, cta max/mean {:.3} (worst round {:.3}), cv {:.3}, \
             search accesses {}, launches inspect={} twc={} lb={} vertex={} edge={}, sync messages {}",
            spec.app.name(),
            spec.scheduler.label(),
            spec.devices,
            s.rounds,
            s.total_edges,
            s.cta_total.max_over_mean,
            s.worst_round_max_over_mean,
            s.weighted_cv,
            s.search_memory_accesses,
            k.inspect,
            k.twc,
            k.lb,
            k.vertex,
            k.edge,
            s.reduce_messages + s.broadcast_messages,
        )
    }
}

pub fn cmd_run(spec: &RunSpec) -> Result<RunOutcome, CliError> {
    let g = load_graph(spec)?;
    let result = execute(spec, &g)?;
    let summary = report::summarize(&result.rounds);
    let files = match &spec.out {
        Some(dir) => report::write_reports(dir, &spec.name, spec, &result.rounds)?,
        None => Vec::new(),
    };
    Ok(RunOutcome { result, summary, files })
}

/// One row of a scheduler comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub scheduler: String,
    pub rounds: usize,
    pub cv: f64,
    pub max_over_mean: f64,
    pub worst_round_max_over_mean: f64,
    pub search_memory_accesses: u64,
    pub lb_launches: u64,
    pub total_launches: u64,
}

impl CompareRow {
    fn new(kind: SchedulerKind, s: &Summary) -> Self {
        CompareRow {
            scheduler: kind.label(),
            rounds: s.rounds,
            cv: s.weighted_cv,
            max_over_mean: s.cta_total.max_over_mean,
            worst_round_max_over_mean: s.worst_round_max_over_mean,
            search_memory_accesses: s.search_memory_accesses,
            lb_launches: s.kernel_launches.lb,
            total_launches: s.kernel_launches.total(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub rows: Vec<CompareRow>,
    /// First label disagreement with the first scheduler, if any.
    pub mismatch: Option<String>,
    pub files: Vec<PathBuf>,
}

/// Rank labels are compared with this absolute tolerance.
pub const RANK_TOLERANCE: f64 = 1e-7;

fn diff_sample(a: &LabelArray, b: &LabelArray, left: &str, right: &str) -> Option<String> {
    a.first_difference(b, RANK_TOLERANCE)
        .map(|(v, x, y)| format!("vertex {v}: {left}={x} {right}={y}"))
}

/// Runs every scheduler on the same graph, sequentially, and checks that
/// they agree on the final labels.
pub fn cmd_compare(spec: &RunSpec, schedulers: &[SchedulerKind]) -> Result<CompareOutcome, CliError> {
    if schedulers.is_empty() {
        return Err(CliError::Usage("compare needs at least one scheduler".into()));
    }
    let g = load_graph(spec)?;
    let mut rows = Vec::new();
    let mut reference: Option<(SchedulerKind, LabelArray)> = None;
    let mut mismatch = None;
    let mut files = Vec::new();
    for &kind in schedulers {
        let run = RunSpec {
            scheduler: kind,
            name: format!("{}-{}", spec.name, kind.label()),
            ..spec.clone()
        };
        let result = execute(&run, &g)?;
        let summary = report::summarize(&result.rounds);
        rows.push(CompareRow::new(kind, &summary));
        if let Some(dir) = &spec.out {
            files.extend(report::write_reports(dir, &run.name, &run, &result.rounds)?);
        }
        match &reference {
            None => reference = Some((kind, result.labels)),
            Some((first, labels)) => {
                if mismatch.is_none() {
                    mismatch = diff_sample(labels, &result.labels, &first.label(), &kind.label());
                }
            }
        }
    }
    if let Some(dir) = &spec.out {
        let path = dir.join(format!("{}.compare.csv", spec.name));
        write_rows(&path, &rows)?;
        files.push(path);
    }
    Ok(CompareOutcome { rows, mismatch, files })
}

/// One row of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub threshold: String,
    /// Effective threshold after resolving `auto`, `0` and `inf`.
    pub resolved: String,
    pub cv: f64,
    pub max_over_mean: f64,
    pub search_memory_accesses: u64,
    pub inspect_launches: u64,
    pub twc_launches: u64,
    pub lb_launches: u64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

/// Runs ALB once per threshold, keeping the spec's distribution.
pub fn cmd_sweep_threshold(spec: &RunSpec, thresholds: &[Threshold]) -> Result<SweepOutcome, CliError> {
    let distribution = match spec.scheduler {
        SchedulerKind::Alb { distribution, .. } | SchedulerKind::Lb { distribution } => distribution,
        _ => crate::scheduler::Distribution::Cyclic,
    };
    let g = load_graph(spec)?;
    let mut rows = Vec::new();
    for &t in thresholds {
        let run = RunSpec {
            scheduler: SchedulerKind::alb(distribution, t),
            ..spec.clone()
        };
        let result = execute(&run, &g)?;
        let s = report::summarize(&result.rounds);
        let resolved = match t.resolve(&spec.kernel) {
            usize::MAX => "inf".to_string(),
            n => n.to_string(),
        };
        rows.push(SweepRow {
            threshold: t.to_string(),
            resolved,
            cv: s.weighted_cv,
            max_over_mean: s.cta_total.max_over_mean,
            search_memory_accesses: s.search_memory_accesses,
            inspect_launches: s.kernel_launches.inspect,
            twc_launches: s.kernel_launches.twc,
            lb_launches: s.kernel_launches.lb,
        });
    }
    let mut files = Vec::new();
    if let Some(dir) = &spec.out {
        let path = dir.join(format!("{}.sweep.csv", spec.name));
        write_rows(&path, &rows)?;
        files.push(path);
    }
    Ok(SweepOutcome { rows, files })
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(EngineError::from)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(EngineError::from)?;
    for row in rows {
        w.serialize(row).map_err(EngineError::from)?;
    }
    w.flush().map_err(EngineError::from)?;
    Ok(())
}

/// Renders rows as an aligned plain-text table.
pub fn format_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&mut header.iter().copied());
    for row in rows {
        out.push('\n');
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}
