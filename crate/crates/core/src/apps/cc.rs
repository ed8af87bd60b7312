use std::borrow::Cow;

use crate::error::EngineError;
use crate::graph::{Adjacency, Direction, Graph, VertexId};
use crate::worklist::Worklist;

use super::{frontier_from_flags, App, LabelArray, Reduction, Update};

/// Min-label propagation over the symmetrized graph. Converges to the
/// smallest vertex id of each undirected component.
#[derive(Debug, Clone, Default)]
pub struct ConnectedComponents {
    component: Vec<u64>,
}

impl ConnectedComponents {
    pub fn new() -> Self {
        Self::default()
    }
}

impl App for ConnectedComponents {
    fn name(&self) -> &'static str {
        "cc"
    }

    fn direction(&self) -> Direction {
        Direction::Push
    }

    fn reduction(&self) -> Reduction {
        Reduction::Min
    }

    fn view<'g>(&self, g: &'g Graph) -> Cow<'g, Graph> {
        Cow::Owned(g.symmetrized())
    }

    fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError> {
        let n = g.num_vertices();
        self.component = (0..n as u64).collect();
        Ok(Worklist::all(n))
    }

    fn seed(&self, out: &mut Vec<u64>) {
        out.clear();
        out.extend_from_slice(&self.component);
    }

    fn apply(&self, _adj: &Adjacency, active: VertexId, neighbor: VertexId, _edge: usize) -> Option<Update> {
        let mine = self.component[active as usize];
        (mine < self.component[neighbor as usize]).then_some(Update {
            target: neighbor,
            value: mine,
            push: true,
        })
    }

    fn finish_round(&mut self, _g: &Graph, reduced: &[u64], pushed: &Worklist) -> Worklist {
        let mut changed = vec![false; self.component.len()];
        for v in pushed.iter() {
            let v = v as usize;
            if reduced[v] < self.component[v] {
                self.component[v] = reduced[v];
                changed[v] = true;
            }
        }
        frontier_from_flags(&changed)
    }

    fn labels(&self) -> LabelArray {
        LabelArray::Component(self.component.iter().map(|&c| c as u32).collect())
    }
}
