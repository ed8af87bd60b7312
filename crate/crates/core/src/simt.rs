//! Simulated launch geometry and execution accounting.
//!
//! Nothing here models time. A kernel is a deterministic loop over global
//! thread ids, and everything the schedulers do is charged to counters:
//! one unit per operator application (attributed to the executing CTA and
//! warp) plus modeled memory accesses for the endpoint binary searches.

use std::fmt;
use std::panic::{self, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelConfig {
    num_ctas: usize,
    threads_per_cta: usize,
    warp_size: usize,
}

impl KernelConfig {
    pub const DEFAULT_CTAS: usize = 84;
    pub const DEFAULT_THREADS_PER_CTA: usize = 256;
    pub const DEFAULT_WARP_SIZE: usize = 32;

    pub fn new(num_ctas: usize, threads_per_cta: usize, warp_size: usize) -> Result<Self, SimError> {
        if num_ctas == 0 || threads_per_cta == 0 || warp_size == 0 {
            return Err(SimError::Config(
                "CTAs, threads per CTA and warp size must all be positive".into(),
            ));
        }
        if !threads_per_cta.is_multiple_of(warp_size) {
            return Err(SimError::Config(format!(
                "threads per CTA ({threads_per_cta}) must be a multiple of the warp size ({warp_size})"
            )));
        }
        if num_ctas.checked_mul(threads_per_cta).is_none_or(|t| t > u32::MAX as usize) {
            return Err(SimError::Config("total thread count overflows".into()));
        }
        Ok(KernelConfig {
            num_ctas,
            threads_per_cta,
            warp_size,
        })
    }

    pub fn num_ctas(&self) -> usize {
        self.num_ctas
    }

    pub fn threads_per_cta(&self) -> usize {
        self.threads_per_cta
    }

    pub fn warp_size(&self) -> usize {
        self.warp_size
    }

    /// `T`, the number of launched threads.
    pub fn total_threads(&self) -> usize {
        self.num_ctas * self.threads_per_cta
    }

    pub fn num_warps(&self) -> usize {
        self.total_threads() / self.warp_size
    }

    pub fn warps_per_cta(&self) -> usize {
        self.threads_per_cta / self.warp_size
    }

    #[inline]
    pub fn coord(&self, global_id: usize) -> ThreadCoord {
        debug_assert!(global_id < self.total_threads());
        ThreadCoord {
            global_id,
            cta_id: global_id / self.threads_per_cta,
            warp_id: global_id / self.warp_size,
            lane_id: global_id % self.warp_size,
        }
    }
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            num_ctas: Self::DEFAULT_CTAS,
            threads_per_cta: Self::DEFAULT_THREADS_PER_CTA,
            warp_size: Self::DEFAULT_WARP_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreadCoord {
    pub global_id: usize,
    pub cta_id: usize,
    /// Global warp index.
    pub warp_id: usize,
    pub lane_id: usize,
}

impl fmt::Display for ThreadCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tid {} (cta {}, warp {}, lane {})",
            self.global_id, self.cta_id, self.warp_id, self.lane_id
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Inspect,
    Twc,
    Lb,
    Vertex,
    Edge,
}

impl KernelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Inspect => "inspect",
            KernelKind::Twc => "twc",
            KernelKind::Lb => "lb",
            KernelKind::Vertex => "vertex",
            KernelKind::Edge => "edge",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelLaunches {
    pub inspect: u64,
    pub twc: u64,
    pub lb: u64,
    pub vertex: u64,
    pub edge: u64,
}

impl KernelLaunches {
    fn bump(&mut self, kind: KernelKind) {
        match kind {
            KernelKind::Inspect => self.inspect += 1,
            KernelKind::Twc => self.twc += 1,
            KernelKind::Lb => self.lb += 1,
            KernelKind::Vertex => self.vertex += 1,
            KernelKind::Edge => self.edge += 1,
        }
    }

    pub fn add(&mut self, other: &KernelLaunches) {
        self.inspect += other.inspect;
        self.twc += other.twc;
        self.lb += other.lb;
        self.vertex += other.vertex;
        self.edge += other.edge;
    }

    pub fn total(&self) -> u64 {
        self.inspect + self.twc + self.lb + self.vertex + self.edge
    }
}

/// Counters of one kernel launch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRecord {
    pub kind: KernelKind,
    pub per_cta_edges: Vec<u64>,
    pub search_memory_accesses: u64,
}

/// Distinct search paths seen by one warp in the current pass.
#[derive(Debug, Clone, Default)]
struct WarpPass {
    epoch: u64,
    paths: Vec<Vec<u32>>,
}

/// Everything charged during one round on one device.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundMetrics {
    /// Operator applications per CTA, summed over all kernels of the round.
    pub per_cta_edges: Vec<u64>,
    pub per_warp_edges: Vec<u64>,
    /// Largest number of distinct search paths a warp took within a single
    /// pass (one cyclic stride or one blocked step). Bounded by the warp size.
    pub per_warp_search_paths: Vec<u32>,
    /// Distinct search paths summed over all passes.
    pub search_paths_total: u64,
    pub search_memory_accesses: u64,
    /// Degree reads performed by inspection kernels.
    pub degree_reads: u64,
    /// Extra bytes held by an edge-indexed (COO) view, when one is used.
    pub coo_bytes: u64,
    pub kernel_launches: KernelLaunches,
    pub kernels: Vec<KernelRecord>,
    #[serde(skip)]
    pass_epoch: u64,
    #[serde(skip)]
    warp_passes: Vec<WarpPass>,
}

impl PartialEq for RoundMetrics {
    fn eq(&self, other: &Self) -> bool {
        self.per_cta_edges == other.per_cta_edges
            && self.per_warp_edges == other.per_warp_edges
            && self.per_warp_search_paths == other.per_warp_search_paths
            && self.search_paths_total == other.search_paths_total
            && self.search_memory_accesses == other.search_memory_accesses
            && self.degree_reads == other.degree_reads
            && self.coo_bytes == other.coo_bytes
            && self.kernel_launches == other.kernel_launches
            && self.kernels == other.kernels
    }
}

impl RoundMetrics {
    pub fn new(config: &KernelConfig) -> Self {
        RoundMetrics {
            per_cta_edges: vec![0; config.num_ctas()],
            per_warp_edges: vec![0; config.num_warps()],
            per_warp_search_paths: vec![0; config.num_warps()],
            search_paths_total: 0,
            search_memory_accesses: 0,
            degree_reads: 0,
            coo_bytes: 0,
            kernel_launches: KernelLaunches::default(),
            kernels: Vec::new(),
            pass_epoch: 1,
            warp_passes: vec![WarpPass::default(); config.num_warps()],
        }
    }

    /// Records a kernel launch; subsequent charges are attributed to it.
    pub fn begin_kernel(&mut self, kind: KernelKind) {
        self.kernel_launches.bump(kind);
        self.kernels.push(KernelRecord {
            kind,
            per_cta_edges: vec![0; self.per_cta_edges.len()],
            search_memory_accesses: 0,
        });
        self.begin_pass();
    }

    /// Starts a new lockstep pass: search-path coalescing only applies among
    /// lanes of the same warp within one pass.
    pub fn begin_pass(&mut self) {
        self.pass_epoch += 1;
    }

    /// One operator application by the thread at `coord`.
    #[inline]
    pub fn charge_edge(&mut self, coord: ThreadCoord) {
        self.per_cta_edges[coord.cta_id] += 1;
        self.per_warp_edges[coord.warp_id] += 1;
        if let Some(k) = self.kernels.last_mut() {
            k.per_cta_edges[coord.cta_id] += 1;
        }
    }

    pub fn charge_degree_reads(&mut self, n: u64) {
        self.degree_reads += n;
    }

    /// Charges one binary search. A path already taken by another lane of the
    /// same warp in the current pass is coalesced and costs nothing.
    pub fn charge_search(&mut self, warp_id: usize, path: &[u32]) {
        let epoch = self.pass_epoch;
        let slot = &mut self.warp_passes[warp_id];
        if slot.epoch != epoch {
            slot.epoch = epoch;
            slot.paths.clear();
        }
        if slot.paths.iter().any(|p| p.as_slice() == path) {
            return;
        }
        slot.paths.push(path.to_vec());
        let distinct = slot.paths.len() as u32;
        let max = &mut self.per_warp_search_paths[warp_id];
        *max = (*max).max(distinct);
        self.search_paths_total += 1;
        self.search_memory_accesses += path.len() as u64;
        if let Some(k) = self.kernels.last_mut() {
            k.search_memory_accesses += path.len() as u64;
        }
    }

    pub fn total_edges(&self) -> u64 {
        self.per_cta_edges.iter().sum()
    }

    pub fn kernel_sequence(&self) -> Vec<KernelKind> {
        self.kernels.iter().map(|k| k.kind).collect()
    }

    /// Per-CTA edges of kernels of one kind, summed.
    pub fn per_cta_edges_of(&self, kind: KernelKind) -> Vec<u64> {
        let mut out = vec![0; self.per_cta_edges.len()];
        for k in self.kernels.iter().filter(|k| k.kind == kind) {
            for (o, x) in out.iter_mut().zip(&k.per_cta_edges) {
                *o += x;
            }
        }
        out
    }
}

/// Launches a kernel of `kind`: `body` runs once per global thread id, in
/// ascending id order. A panic inside `body` is reported with the thread's
/// coordinates.
pub fn for_each_thread<F>(
    config: &KernelConfig,
    kind: KernelKind,
    metrics: &mut RoundMetrics,
    mut body: F,
) -> Result<(), SimError>
where
    F: FnMut(ThreadCoord, &mut RoundMetrics) -> Result<(), SimError>,
{
    metrics.begin_kernel(kind);
    for tid in 0..config.total_threads() {
        let coord = config.coord(tid);
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| body(coord, metrics)));
        match outcome {
            Ok(result) => result?,
            Err(payload) => {
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "unknown panic".into());
                return Err(SimError::ThreadPanic { coord, message });
            }
        }
    }
    Ok(())
}
