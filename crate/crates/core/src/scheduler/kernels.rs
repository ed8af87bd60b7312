//! Kernel bodies shared by the schedulers.

use crate::error::SimError;
use crate::graph::{Adjacency, VertexId};
use crate::simt::{for_each_thread, KernelConfig, KernelKind, RoundMetrics, ThreadCoord};
use crate::worklist::{PrefixWork, Worklist};

use super::distribution::Distribution;
use super::inspect::{Binned, TwcBins};
use super::EdgeVisitor;

/// Pushed vertices tagged with the pushing thread; merged by thread id, then
/// push order.
#[derive(Debug, Default)]
pub(crate) struct PushCollector {
    entries: Vec<(usize, VertexId)>,
}

impl PushCollector {
    pub(crate) fn finish(mut self, num_vertices: usize) -> Worklist {
        self.entries.sort_by_key(|&(tid, _)| tid);
        let mut wl = Worklist::sparse(num_vertices);
        for (_, v) in self.entries {
            wl.push(v).expect("visitor pushed an out-of-range vertex");
        }
        wl
    }
}

/// Applies the operator along `edge` of `active` as thread `coord`.
#[inline]
pub(crate) fn apply_edge(
    adj: &Adjacency,
    active: VertexId,
    edge: usize,
    coord: ThreadCoord,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
    pushes: &mut PushCollector,
) -> Result<(), SimError> {
    let neighbor = adj.targets()[edge];
    metrics.charge_edge(coord);
    match visitor.visit(active, neighbor, edge) {
        Ok(Some(v)) => {
            pushes.entries.push((coord.global_id, v));
            Ok(())
        }
        Ok(None) => Ok(()),
        Err(message) => Err(SimError::Operator {
            active,
            edge,
            message,
        }),
    }
}

/// Spreads the edges of every vertex in `prefix` over all threads and
/// recovers each edge's vertex by binary search over the prefix sums.
/// Lanes run in lockstep: one pass per cyclic stride or blocked step.
pub fn execute_lb_kernel(
    adj: &Adjacency,
    prefix: &PrefixWork,
    distribution: Distribution,
    config: &KernelConfig,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
) -> Result<Worklist, SimError> {
    let mut pushes = PushCollector::default();
    let total = prefix.total_edges();
    if total == 0 {
        return Ok(pushes.finish(adj.num_vertices()));
    }
    metrics.begin_kernel(KernelKind::Lb);
    let threads = config.total_threads();
    let mut probes = Vec::with_capacity(32);
    for pass in 0..distribution.passes(total, threads) {
        metrics.begin_pass();
        for tid in 0..threads {
            let Some(global_edge) = distribution.edge_at(total, threads, tid, pass) else {
                match distribution {
                    // later threads have even larger edge indices
                    Distribution::Cyclic => break,
                    Distribution::Blocked => continue,
                }
            };
            probes.clear();
            let owner = prefix.find_owner(global_edge, &mut probes)?;
            let coord = config.coord(tid);
            metrics.charge_search(coord.warp_id, &probes);
            let edge = adj.first_edge(owner.vertex) + owner.offset;
            apply_edge(adj, owner.vertex, edge, coord, visitor, metrics, &mut pushes)?;
        }
    }
    Ok(pushes.finish(adj.num_vertices()))
}

#[derive(Clone, Copy)]
enum Bin {
    Small,
    Medium,
    Large,
}

/// Thread-warp-CTA processing of binned vertices. A small vertex is handled
/// by its owner thread, a medium one by the owner's warp, a large one by the
/// owner's CTA; lanes take the vertex's edges round-robin.
pub fn execute_twc_kernel(
    adj: &Adjacency,
    bins: &TwcBins,
    config: &KernelConfig,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
) -> Result<Worklist, SimError> {
    let mut pushes = PushCollector::default();
    if bins.is_empty() {
        return Ok(pushes.finish(adj.num_vertices()));
    }
    let mut work: Vec<(usize, Bin, VertexId)> = Vec::with_capacity(bins.len());
    let tag = |bin: Bin| move |b: &Binned| (b.owner, bin, b.vertex);
    work.extend(bins.small.iter().map(tag(Bin::Small)));
    work.extend(bins.medium.iter().map(tag(Bin::Medium)));
    work.extend(bins.large.iter().map(tag(Bin::Large)));
    work.sort_by_key(|&(owner, _, _)| owner);

    let warp = config.warp_size();
    let tpb = config.threads_per_cta();
    let mut cursor = 0;
    for_each_thread(config, KernelKind::Twc, metrics, |coord, metrics| {
        while cursor < work.len() && work[cursor].0 == coord.global_id {
            let (_, bin, v) = work[cursor];
            cursor += 1;
            let (base, width) = match bin {
                Bin::Small => (coord.global_id, 1),
                Bin::Medium => (coord.warp_id * warp, warp),
                Bin::Large => (coord.cta_id * tpb, tpb),
            };
            for (j, edge) in adj.edge_range(v).enumerate() {
                let lane = config.coord(base + j % width);
                apply_edge(adj, v, edge, lane, visitor, metrics, &mut pushes)?;
            }
        }
        Ok(())
    })?;
    Ok(pushes.finish(adj.num_vertices()))
}

/// Frontier position `i` goes to thread `i mod T`, which processes all of
/// the vertex's edges itself.
pub(crate) fn execute_vertex_kernel(
    adj: &Adjacency,
    frontier: &[VertexId],
    config: &KernelConfig,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
) -> Result<Worklist, SimError> {
    let mut pushes = PushCollector::default();
    let threads = config.total_threads();
    for_each_thread(config, KernelKind::Vertex, metrics, |coord, metrics| {
        for &v in frontier.iter().skip(coord.global_id).step_by(threads) {
            for edge in adj.edge_range(v) {
                apply_edge(adj, v, edge, coord, visitor, metrics, &mut pushes)?;
            }
        }
        Ok(())
    })?;
    Ok(pushes.finish(adj.num_vertices()))
}

/// Active edges (frontier order, then adjacency order) dealt round-robin to
/// threads; each thread reads its edge's row vertex from the COO array
/// instead of searching.
pub(crate) fn execute_edge_kernel(
    adj: &Adjacency,
    coo_sources: &[VertexId],
    frontier: &[VertexId],
    config: &KernelConfig,
    visitor: &mut dyn EdgeVisitor,
    metrics: &mut RoundMetrics,
) -> Result<Worklist, SimError> {
    let mut pushes = PushCollector::default();
    let active_edges: Vec<usize> = frontier.iter().flat_map(|&v| adj.edge_range(v)).collect();
    metrics.coo_bytes = std::mem::size_of_val(coo_sources) as u64;
    let threads = config.total_threads();
    for_each_thread(config, KernelKind::Edge, metrics, |coord, metrics| {
        for &edge in active_edges.iter().skip(coord.global_id).step_by(threads) {
            let active = coo_sources[edge];
            apply_edge(adj, active, edge, coord, visitor, metrics, &mut pushes)?;
        }
        Ok(())
    })?;
    Ok(pushes.finish(adj.num_vertices()))
}
