//! Work-distribution policies.
//!
//! Every scheduler maps the same frontier onto the simulated threads and
//! applies the operator exactly once per (active vertex, edge) pair. They
//! differ only in which thread does the work and in what that costs.

mod distribution;
mod inspect;
mod kernels;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use distribution::{assign_blocked, assign_cyclic, Distribution};
pub use inspect::{inspect, Binned, TwcBins, TwcCutoffs};
pub use kernels::{execute_lb_kernel, execute_twc_kernel};

use crate::error::SimError;
use crate::graph::{Direction, Graph, VertexId};
use crate::simt::{for_each_thread, KernelConfig, KernelKind, RoundMetrics};
use crate::worklist::{compute_prefix, Worklist};

/// Operator hook called by the kernels.
pub trait EdgeVisitor {
    /// Applies the operator along `edge` (an index into the traversal
    /// adjacency) from the active vertex to `neighbor`. Returns a vertex to
    /// push onto the next frontier, if any.
    fn visit(
        &mut self,
        active: VertexId,
        neighbor: VertexId,
        edge: usize,
    ) -> Result<Option<VertexId>, String>;
}

impl<F> EdgeVisitor for F
where
    F: FnMut(VertexId, VertexId, usize) -> Result<Option<VertexId>, String>,
{
    fn visit(
        &mut self,
        active: VertexId,
        neighbor: VertexId,
        edge: usize,
    ) -> Result<Option<VertexId>, String> {
        self(active, neighbor, edge)
    }
}

/// Huge-vertex degree threshold for ALB.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// Number of launched threads.
    Auto,
    Fixed(usize),
    /// No vertex is huge.
    Infinite,
}

impl Threshold {
    pub fn resolve(self, config: &KernelConfig) -> usize {
        match self {
            Threshold::Auto => config.total_threads(),
            Threshold::Fixed(0) => {
                log::warn!("threshold 0 would make zero-degree vertices huge; using 1");
                1
            }
            Threshold::Fixed(t) => t,
            Threshold::Infinite => usize::MAX,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Auto => f.write_str("auto"),
            Threshold::Fixed(t) => write!(f, "{t}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Threshold::Auto),
            "inf" | "infinite" => Ok(Threshold::Infinite),
            n => n
                .parse()
                .map(Threshold::Fixed)
                .map_err(|_| format!("bad threshold {n:?} (expected a count, auto or inf)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SchedulerKind {
    Vertex,
    Edge,
    Twc,
    Lb {
        distribution: Distribution,
    },
    Alb {
        distribution: Distribution,
        threshold: Threshold,
    },
}

impl SchedulerKind {
    /// Gunrock-style LB: blocked distribution.
    pub const LB: SchedulerKind = SchedulerKind::Lb {
        distribution: Distribution::Blocked,
    };
    pub const ALB: SchedulerKind = SchedulerKind::Alb {
        distribution: Distribution::Cyclic,
        threshold: Threshold::Auto,
    };

    pub fn alb(distribution: Distribution, threshold: Threshold) -> Self {
        SchedulerKind::Alb {
            distribution,
            threshold,
        }
    }

    /// Short label used in reports, e.g. `alb-cyclic`.
    pub fn label(&self) -> String {
        match self {
            SchedulerKind::Vertex => "vertex".into(),
            SchedulerKind::Edge => "edge".into(),
            SchedulerKind::Twc => "twc".into(),
            SchedulerKind::Lb { distribution } => format!("lb-{distribution}"),
            SchedulerKind::Alb { distribution, .. } => format!("alb-{distribution}"),
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for SchedulerKind {
    type Err = String;

    /// Accepts `vertex`, `edge`, `twc`, `lb`, `alb`, and the
    /// `lb-<distribution>` / `alb-<distribution>` forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, dist) = match s.split_once('-') {
            Some((n, d)) => (n, Some(d.parse::<Distribution>()?)),
            None => (s, None),
        };
        match (name, dist) {
            ("vertex", None) => Ok(SchedulerKind::Vertex),
            ("edge", None) => Ok(SchedulerKind::Edge),
            ("twc", None) => Ok(SchedulerKind::Twc),
            ("lb", d) => Ok(SchedulerKind::Lb {
                distribution: d.unwrap_or(Distribution::Blocked),
            }),
            ("alb", d) => Ok(SchedulerKind::Alb {
                distribution: d.unwrap_or(Distribution::Cyclic),
                threshold: Threshold::Auto,
            }),
            _ => Err(format!(
                "unknown scheduler {s:?} (expected vertex, edge, twc, lb or alb)"
            )),
        }
    }
}

/// Processes one frontier under `kind`. Returns the pushed vertices.
pub fn run_scheduler(
    kind: SchedulerKind,
    wl: &Worklist,
    graph: &Graph,
    direction: Direction,
    config: &KernelConfig,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
) -> Result<Worklist, SimError> {
    let adj = graph.adjacency(direction);
    let cutoffs = TwcCutoffs::for_config(config);
    match kind {
        SchedulerKind::Vertex => {
            let frontier: Vec<VertexId> = wl.iter().collect();
            kernels::execute_vertex_kernel(adj, &frontier, config, visitor, metrics)
        }
        SchedulerKind::Edge => {
            let frontier: Vec<VertexId> = wl.iter().collect();
            let coo = graph.coo_sources(direction);
            kernels::execute_edge_kernel(adj, coo, &frontier, config, visitor, metrics)
        }
        SchedulerKind::Twc => {
            let (_, bins) = inspect(wl, adj, usize::MAX, config, cutoffs);
            execute_twc_kernel(adj, &bins, config, visitor, metrics)
        }
        SchedulerKind::Lb { distribution } => {
            let frontier: Vec<VertexId> = wl.iter().collect();
            let prefix = compute_prefix(&frontier, adj);
            execute_lb_kernel(adj, &prefix, distribution, config, visitor, metrics)
        }
        SchedulerKind::Alb {
            distribution,
            threshold,
        } => {
            let threshold = threshold.resolve(config);
            let active = wl.len();
            let threads = config.total_threads();
            // one degree read per frontier position the thread strides over
            for_each_thread(config, KernelKind::Inspect, metrics, |coord, m| {
                let mine = active.saturating_sub(coord.global_id).div_ceil(threads);
                m.charge_degree_reads(mine as u64);
                Ok(())
            })?;
            let (huge, bins) = inspect(wl, adj, threshold, config, cutoffs);
            let mut pushed = Worklist::sparse(adj.num_vertices());
            if !huge.is_empty() {
                let prefix = compute_prefix(&huge, adj);
                let lb = execute_lb_kernel(adj, &prefix, distribution, config, visitor, metrics)?;
                for v in lb.iter() {
                    pushed.push(v)?;
                }
            }
            let twc = execute_twc_kernel(adj, &bins, config, visitor, metrics)?;
            for v in twc.iter() {
                pushed.push(v)?;
            }
            Ok(pushed)
        }
    }
}
