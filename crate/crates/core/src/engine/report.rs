//! Imbalance summaries and report files.
//!
//! Files written for a run named `<run>`:
//!
//! * `<run>.cta.csv`: `round,device,cta,edges`
//! * `<run>.warp.csv`: `round,device,warp,edges,search_paths`
//! * `<run>.round.csv`: one row per round, see [`RoundSummary`]
//! * `<run>.summary.json`: [`Report`]
//!
//! Floats are printed with a fixed number of digits so that identical runs
//! produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::RoundLog;
use crate::error::EngineError;
use crate::simt::KernelLaunches;

pub const SCHEMA_VERSION: u32 = 1;

/// Spread of a load vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoadStats {
    pub max: u64,
    pub mean: f64,
    /// `max / mean`; 1.0 for an all-zero vector.
    pub max_over_mean: f64,
    /// Population standard deviation over mean; 0 for an all-zero vector.
    pub cv: f64,
}

impl LoadStats {
    pub fn of(loads: &[u64]) -> Self {
        if loads.is_empty() {
            return LoadStats { max: 0, mean: 0.0, max_over_mean: 1.0, cv: 0.0 };
        }
        let n = loads.len() as f64;
        let max = loads.iter().copied().max().unwrap_or(0);
        let mean = loads.iter().map(|&x| x as f64).sum::<f64>() / n;
        if mean == 0.0 {
            return LoadStats { max, mean, max_over_mean: 1.0, cv: 0.0 };
        }
        let var = loads.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n;
        LoadStats {
            max,
            mean,
            max_over_mean: max as f64 / mean,
            cv: var.sqrt() / mean,
        }
    }
}

/// Per-round counters, one row of `<run>.round.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundSummary {
    pub round: usize,
    pub frontier: usize,
    pub edges: u64,
    /// Per-CTA loads of all devices taken together.
    pub cta: LoadStats,
    pub warp: LoadStats,
    /// Max/mean over devices of each device's most loaded CTA.
    pub device_straggler: f64,
    pub search_paths: u64,
    pub search_memory_accesses: u64,
    pub degree_reads: u64,
    pub kernel_launches: KernelLaunches,
    pub sync_messages: u64,
}

impl RoundSummary {
    pub fn of(log: &RoundLog) -> Self {
        let ctas: Vec<u64> = log.devices.iter().flat_map(|m| m.per_cta_edges.iter().copied()).collect();
        let warps: Vec<u64> = log.devices.iter().flat_map(|m| m.per_warp_edges.iter().copied()).collect();
        let mut launches = KernelLaunches::default();
        for m in &log.devices {
            launches.add(&m.kernel_launches);
        }
        RoundSummary {
            round: log.round,
            frontier: log.frontier,
            edges: log.total_edges(),
            cta: LoadStats::of(&ctas),
            warp: LoadStats::of(&warps),
            device_straggler: LoadStats::of(&log.device_loads()).max_over_mean,
            search_paths: log.devices.iter().map(|m| m.search_paths_total).sum(),
            search_memory_accesses: log.devices.iter().map(|m| m.search_memory_accesses).sum(),
            degree_reads: log.devices.iter().map(|m| m.degree_reads).sum(),
            kernel_launches: launches,
            sync_messages: log.sync.total(),
        }
    }
}

/// Power-of-two histogram of per-CTA, per-round loads. Bucket 0 counts
/// zero loads; bucket `i > 0` counts loads in `[2^(i-1), 2^i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub buckets: Vec<u64>,
}

impl Histogram {
    pub fn bucket_of(load: u64) -> usize {
        (u64::BITS - load.leading_zeros()) as usize
    }

    pub fn add(&mut self, load: u64) {
        let b = Self::bucket_of(load);
        if self.buckets.len() <= b {
            self.buckets.resize(b + 1, 0);
        }
        self.buckets[b] += 1;
    }
}

/// Aggregate over all rounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rounds: usize,
    pub total_edges: u64,
    /// Per-CTA loads summed over rounds.
    pub cta_total: LoadStats,
    /// Worst per-round CTA max/mean and CV.
    pub worst_round_max_over_mean: f64,
    pub worst_round_cv: f64,
    /// Round-length-weighted mean of the per-round CTA CV.
    pub weighted_cv: f64,
    pub worst_device_straggler: f64,
    pub cta_histogram: Histogram,
    pub search_paths: u64,
    pub search_memory_accesses: u64,
    pub degree_reads: u64,
    pub coo_bytes: u64,
    pub kernel_launches: KernelLaunches,
    pub reduce_messages: u64,
    pub broadcast_messages: u64,
}

pub fn summarize(log: &[RoundLog]) -> Summary {
    let ctas = log.first().map_or(0, |r| r.devices.iter().map(|m| m.per_cta_edges.len()).sum());
    let mut cta_total = vec![0u64; ctas];
    let mut histogram = Histogram { buckets: Vec::new() };
    let mut launches = KernelLaunches::default();
    let mut s = Summary {
        rounds: log.len(),
        total_edges: 0,
        cta_total: LoadStats::of(&[]),
        worst_round_max_over_mean: 1.0,
        worst_round_cv: 0.0,
        weighted_cv: 0.0,
        worst_device_straggler: 1.0,
        cta_histogram: Histogram { buckets: Vec::new() },
        search_paths: 0,
        search_memory_accesses: 0,
        degree_reads: 0,
        coo_bytes: 0,
        kernel_launches: KernelLaunches::default(),
        reduce_messages: 0,
        broadcast_messages: 0,
    };
    let mut cv_weighted = 0.0;
    for r in log {
        let row = RoundSummary::of(r);
        let loads = r.devices.iter().flat_map(|m| m.per_cta_edges.iter().copied());
        for (slot, load) in cta_total.iter_mut().zip(loads) {
            *slot += load;
            histogram.add(load);
        }
        s.total_edges += row.edges;
        s.worst_round_max_over_mean = s.worst_round_max_over_mean.max(row.cta.max_over_mean);
        s.worst_round_cv = s.worst_round_cv.max(row.cta.cv);
        s.worst_device_straggler = s.worst_device_straggler.max(row.device_straggler);
        cv_weighted += row.cta.cv * row.edges as f64;
        s.search_paths += row.search_paths;
        s.search_memory_accesses += row.search_memory_accesses;
        s.degree_reads += row.degree_reads;
        s.coo_bytes = s.coo_bytes.max(r.devices.iter().map(|m| m.coo_bytes).sum());
        launches.add(&row.kernel_launches);
        s.reduce_messages += r.sync.reduce_messages;
        s.broadcast_messages += r.sync.broadcast_messages;
    }
    if s.total_edges > 0 {
        s.weighted_cv = cv_weighted / s.total_edges as f64;
    }
    s.cta_total = LoadStats::of(&cta_total);
    s.cta_histogram = histogram;
    s.kernel_launches = launches;
    s
}

/// Contents of `<run>.summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report<'a, M: Serialize> {
    pub schema_version: u32,
    /// Whatever describes the run (typically the run spec).
    pub run: &'a M,
    pub summary: Summary,
    pub per_round: Vec<RoundSummary>,
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, EngineError> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

/// Writes the four report files into `dir` and returns their paths.
pub fn write_reports<M: Serialize>(
    dir: &Path,
    name: &str,
    run: &M,
    log: &[RoundLog],
) -> Result<Vec<PathBuf>, EngineError> {
    std::fs::create_dir_all(dir)?;
    let path = |ext: &str| dir.join(format!("{name}.{ext}"));

    let cta_path = path("cta.csv");
    let mut w = csv_writer(&cta_path)?;
    w.write_record(["round", "device", "cta", "edges"])?;
    for r in log {
        for (d, m) in r.devices.iter().enumerate() {
            for (c, &e) in m.per_cta_edges.iter().enumerate() {
                w.write_record([r.round.to_string(), d.to_string(), c.to_string(), e.to_string()])?;
            }
        }
    }
    w.flush()?;

    let warp_path = path("warp.csv");
    let mut w = csv_writer(&warp_path)?;
    w.write_record(["round", "device", "warp", "edges", "search_paths"])?;
    for r in log {
        for (d, m) in r.devices.iter().enumerate() {
            for (i, (&e, &p)) in m.per_warp_edges.iter().zip(&m.per_warp_search_paths).enumerate() {
                w.write_record([
                    r.round.to_string(),
                    d.to_string(),
                    i.to_string(),
                    e.to_string(),
                    p.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;

    let per_round: Vec<RoundSummary> = log.iter().map(RoundSummary::of).collect();
    let round_path = path("round.csv");
    let mut w = csv_writer(&round_path)?;
    w.write_record([
        "round",
        "frontier",
        "edges",
        "cta_max",
        "cta_mean",
        "cta_max_over_mean",
        "cta_cv",
        "warp_max_over_mean",
        "warp_cv",
        "device_straggler",
        "search_paths",
        "search_memory_accesses",
        "degree_reads",
        "launches_inspect",
        "launches_twc",
        "launches_lb",
        "launches_vertex",
        "launches_edge",
        "sync_messages",
    ])?;
    for r in &per_round {
        let k = &r.kernel_launches;
        w.write_record([
            r.round.to_string(),
            r.frontier.to_string(),
            r.edges.to_string(),
            r.cta.max.to_string(),
            f(r.cta.mean),
            f(r.cta.max_over_mean),
            f(r.cta.cv),
            f(r.warp.max_over_mean),
            f(r.warp.cv),
            f(r.device_straggler),
            r.search_paths.to_string(),
            r.search_memory_accesses.to_string(),
            r.degree_reads.to_string(),
            k.inspect.to_string(),
            k.twc.to_string(),
            k.lb.to_string(),
            k.vertex.to_string(),
            k.edge.to_string(),
            r.sync_messages.to_string(),
        ])?;
    }
    w.flush()?;

    let summary_path = path("summary.json");
    let report = Report {
        schema_version: SCHEMA_VERSION,
        run,
        summary: summarize(log),
        per_round,
    };
    let mut out = BufWriter::new(File::create(&summary_path)?);
    serde_json::to_writer_pretty(&mut out, &report)?;
    out.write_all(b"\n")?;
    out.flush()?;

    Ok(vec![cta_path, warp_path, round_path, summary_path])
}
