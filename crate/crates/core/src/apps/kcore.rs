use std::borrow::Cow;

use crate::error::EngineError;
use crate::graph::{Adjacency, Direction, Graph, VertexId};
use crate::worklist::Worklist;

use super::{frontier_from_flags, App, LabelArray, Reduction, Update};

/// Membership in the k-core of the symmetrized simple graph.
///
/// Vertices whose remaining degree drops below `k` are removed; each round
/// the surviving neighbors of the vertices removed in the previous round
/// pull the number of such neighbors and decrement their degree.
#[derive(Debug, Clone)]
pub struct KCore {
    k: u64,
    alive: Vec<bool>,
    degree: Vec<u64>,
    removed_last: Vec<bool>,
}

impl KCore {
    pub fn new(k: u64) -> Result<Self, EngineError> {
        if k == 0 {
            return Err(EngineError::Config("k must be at least 1".into()));
        }
        Ok(KCore {
            k,
            alive: Vec::new(),
            degree: Vec::new(),
            removed_last: Vec::new(),
        })
    }

    /// Marks `removed` dead and returns their surviving neighbors.
    fn remove(&mut self, g: &Graph, removed: &[VertexId]) -> Worklist {
        self.removed_last.iter_mut().for_each(|r| *r = false);
        for &v in removed {
            self.alive[v as usize] = false;
            self.removed_last[v as usize] = true;
        }
        let mut next = vec![false; self.alive.len()];
        for &v in removed {
            for &u in g.csr().neighbors(v) {
                if self.alive[u as usize] {
                    next[u as usize] = true;
                }
            }
        }
        frontier_from_flags(&next)
    }
}

impl App for KCore {
    fn name(&self) -> &'static str {
        "kcore"
    }

    fn direction(&self) -> Direction {
        Direction::Pull
    }

    fn reduction(&self) -> Reduction {
        Reduction::Add
    }

    fn view<'g>(&self, g: &'g Graph) -> Cow<'g, Graph> {
        Cow::Owned(g.symmetrized())
    }

    fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError> {
        let n = g.num_vertices();
        self.alive = vec![true; n];
        self.removed_last = vec![false; n];
        self.degree = (0..n as VertexId).map(|v| g.csr().degree(v) as u64).collect();
        let removed: Vec<VertexId> = (0..n as VertexId)
            .filter(|&v| self.degree[v as usize] < self.k)
            .collect();
        Ok(self.remove(g, &removed))
    }

    fn seed(&self, out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.alive.len(), 0);
    }

    fn apply(&self, _adj: &Adjacency, active: VertexId, neighbor: VertexId, _edge: usize) -> Option<Update> {
        self.removed_last[neighbor as usize].then_some(Update {
            target: active,
            value: 1,
            push: false,
        })
    }

    fn finish_round(&mut self, g: &Graph, reduced: &[u64], _pushed: &Worklist) -> Worklist {
        let mut removed = Vec::new();
        for (v, &lost) in reduced.iter().enumerate() {
            if lost == 0 || !self.alive[v] {
                continue;
            }
            self.degree[v] -= lost;
            if self.degree[v] < self.k {
                removed.push(v as VertexId);
            }
        }
        self.remove(g, &removed)
    }

    fn labels(&self) -> LabelArray {
        LabelArray::Core(self.alive.clone())
    }
}
