use crate::error::EngineError;
use crate::graph::{Adjacency, Direction, Graph, VertexId};
use crate::worklist::Worklist;

use super::{frontier_from_flags, App, LabelArray, Reduction, Update, UNREACHABLE};

/// Shared push-style relaxation: `dist[dst] = min(dist[dst], dist[src] + w)`.
#[derive(Debug, Clone)]
struct Relaxation {
    source: VertexId,
    dist: Vec<u64>,
    unit_weights: bool,
}

impl Relaxation {
    fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError> {
        let n = g.num_vertices();
        if self.source as usize >= n {
            return Err(EngineError::Config(format!(
                "source {} out of range for {n} vertices",
                self.source
            )));
        }
        self.dist = vec![UNREACHABLE; n];
        self.dist[self.source as usize] = 0;
        Ok(Worklist::from_vertices(n, [self.source])?)
    }

    #[inline]
    fn apply(&self, adj: &Adjacency, active: VertexId, neighbor: VertexId, edge: usize) -> Option<Update> {
        let w = if self.unit_weights { 1 } else { adj.weight(edge) as u64 };
        let candidate = self.dist[active as usize].saturating_add(w);
        (candidate < self.dist[neighbor as usize]).then_some(Update {
            target: neighbor,
            value: candidate,
            push: true,
        })
    }

    fn finish_round(&mut self, reduced: &[u64], pushed: &Worklist) -> Worklist {
        let mut changed = vec![false; self.dist.len()];
        for v in pushed.iter() {
            let slot = &mut self.dist[v as usize];
            if reduced[v as usize] < *slot {
                *slot = reduced[v as usize];
                changed[v as usize] = true;
            }
        }
        frontier_from_flags(&changed)
    }
}

/// Breadth-first search: hop distances from `source`.
#[derive(Debug, Clone)]
pub struct Bfs(Relaxation);

impl Bfs {
    pub fn new(source: VertexId) -> Self {
        Bfs(Relaxation {
            source,
            dist: Vec::new(),
            unit_weights: true,
        })
    }
}

/// Single-source shortest paths over the integer edge weights (1 when the
/// graph is unweighted).
#[derive(Debug, Clone)]
pub struct Sssp(Relaxation);

impl Sssp {
    pub fn new(source: VertexId) -> Self {
        Sssp(Relaxation {
            source,
            dist: Vec::new(),
            unit_weights: false,
        })
    }
}

macro_rules! relaxation_app {
    ($ty:ty, $name:literal) => {
        impl App for $ty {
            fn name(&self) -> &'static str {
                $name
            }

            fn direction(&self) -> Direction {
                Direction::Push
            }

            fn reduction(&self) -> Reduction {
                Reduction::Min
            }

            fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError> {
                self.0.init(g)
            }

            fn seed(&self, out: &mut Vec<u64>) {
                out.clear();
                out.extend_from_slice(&self.0.dist);
            }

            fn apply(
                &self,
                adj: &Adjacency,
                active: VertexId,
                neighbor: VertexId,
                edge: usize,
            ) -> Option<Update> {
                self.0.apply(adj, active, neighbor, edge)
            }

            fn finish_round(&mut self, _g: &Graph, reduced: &[u64], pushed: &Worklist) -> Worklist {
                self.0.finish_round(reduced, pushed)
            }

            fn labels(&self) -> LabelArray {
                LabelArray::Distance(self.0.dist.clone())
            }
        }
    };
}

relaxation_app!(Bfs, "bfs");
relaxation_app!(Sssp, "sssp");
