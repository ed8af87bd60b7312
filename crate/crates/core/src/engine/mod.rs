//! Bulk-synchronous round driver.
//!
//! Each round every device runs the scheduler's kernel sequence over its
//! local share of the frontier, writing into a private reduction buffer.
//! A sync step then folds mirrors into masters, and the application commits
//! the reduced values and produces the next frontier.

mod partition;
pub mod report;

use serde::{Deserialize, Serialize};

pub use partition::{sync_labels, Partition, SyncStats};

use crate::apps::{App, LabelArray, Reduction};
use crate::error::EngineError;
use crate::graph::{Adjacency, Graph, VertexId};
use crate::scheduler::{run_scheduler, EdgeVisitor, SchedulerKind};
use crate::simt::{KernelConfig, RoundMetrics};
use crate::worklist::Worklist;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub scheduler: SchedulerKind,
    pub kernel: KernelConfig,
    pub devices: usize,
    /// Round limit; `None` means `max(10 * |V|, 1000)`.
    pub max_rounds: Option<usize>,
}

impl EngineConfig {
    pub fn new(scheduler: SchedulerKind, kernel: KernelConfig) -> Self {
        EngineConfig {
            scheduler,
            kernel,
            devices: 1,
            max_rounds: None,
        }
    }

    pub fn with_devices(mut self, devices: usize) -> Self {
        self.devices = devices;
        self
    }

    pub fn with_max_rounds(mut self, rounds: usize) -> Self {
        self.max_rounds = Some(rounds);
        self
    }
}

/// Everything recorded for one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: usize,
    /// Active vertices at the start of the round.
    pub frontier: usize,
    /// One entry per device.
    pub devices: Vec<RoundMetrics>,
    pub sync: SyncStats,
}

impl RoundLog {
    /// Straggler load of each device: its most loaded CTA this round.
    pub fn device_loads(&self) -> Vec<u64> {
        self.devices
            .iter()
            .map(|m| m.per_cta_edges.iter().copied().max().unwrap_or(0))
            .collect()
    }

    pub fn total_edges(&self) -> u64 {
        self.devices.iter().map(RoundMetrics::total_edges).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub labels: LabelArray,
    pub rounds: Vec<RoundLog>,
}

struct ReduceVisitor<'a> {
    app: &'a dyn App,
    adj: &'a Adjacency,
    buffer: &'a mut [u64],
    reduction: Reduction,
}

impl EdgeVisitor for ReduceVisitor<'_> {
    #[inline]
    fn visit(
        &mut self,
        active: VertexId,
        neighbor: VertexId,
        edge: usize,
    ) -> Result<Option<VertexId>, String> {
        let Some(update) = self.app.apply(self.adj, active, neighbor, edge) else {
            return Ok(None);
        };
        let slot = self
            .buffer
            .get_mut(update.target as usize)
            .ok_or_else(|| format!("update target {} out of range", update.target))?;
        self.reduction.combine(slot, update.value);
        Ok(update.push.then_some(update.target))
    }
}

/// Runs `app` to convergence on `g`.
pub fn run(g: &Graph, app: &mut dyn App, cfg: &EngineConfig) -> Result<RunResult, EngineError> {
    if cfg.devices == 0 {
        return Err(EngineError::Config("at least one device is required".into()));
    }
    let view = app.view(g);
    let graph: &Graph = &view;
    let direction = app.direction();
    let reduction = app.reduction();
    let adj = graph.adjacency(direction);
    let n = graph.num_vertices();
    let partition = Partition::contiguous(adj, cfg.devices);
    let max_rounds = cfg.max_rounds.unwrap_or_else(|| (10 * n).max(1000));

    let mut frontier = app.init(graph)?;
    let mut log: Vec<RoundLog> = Vec::new();
    let mut buffers: Vec<Vec<u64>> = vec![Vec::new(); cfg.devices];

    while !frontier.is_empty() {
        if log.len() >= max_rounds {
            let dump = serde_json::to_string(&report::summarize(&log))?;
            return Err(EngineError::NonConvergence {
                rounds: log.len(),
                frontier: frontier.len(),
                metrics_dump: dump,
            });
        }
        let mut locals: Vec<Worklist> = (0..cfg.devices).map(|_| Worklist::sparse(n)).collect();
        for v in frontier.iter() {
            locals[partition.owner(v)].push(v)?;
        }

        let mut pushed = Worklist::dense(n);
        let mut device_metrics = Vec::with_capacity(cfg.devices);
        for (device, local) in locals.iter().enumerate() {
            app.seed(&mut buffers[device]);
            let mut metrics = RoundMetrics::new(&cfg.kernel);
            if !local.is_empty() {
                let mut visitor = ReduceVisitor {
                    app: &*app,
                    adj,
                    buffer: &mut buffers[device],
                    reduction,
                };
                let out = run_scheduler(
                    cfg.scheduler,
                    local,
                    graph,
                    direction,
                    &cfg.kernel,
                    &mut visitor,
                    &mut metrics,
                )?;
                for v in out.iter() {
                    pushed.push(v)?;
                }
            }
            device_metrics.push(metrics);
        }

        let sync = sync_labels(&partition, &mut buffers, reduction);
        let reduced: Vec<u64> = (0..n)
            .map(|v| buffers[partition.owner(v as VertexId)][v])
            .collect();
        log.push(RoundLog {
            round: log.len(),
            frontier: frontier.len(),
            devices: device_metrics,
            sync,
        });
        frontier = app.finish_round(graph, &reduced, &pushed);
    }
    Ok(RunResult {
        labels: app.labels(),
        rounds: log,
    })
}

#[cfg(test)]
mod tests;
