use crate::error::EngineError;
use crate::graph::{Adjacency, Direction, Graph, VertexId};
use crate::worklist::Worklist;

use super::{frontier_from_flags, App, LabelArray, Reduction, Update};

/// Fixed-point unit for ranks and residuals (2^40). Integer residuals make
/// the add-reduction exact, so results do not depend on which thread or
/// device summed which contribution.
pub const RANK_SCALE: u64 = 1 << 40;
const SCALE_BITS: u32 = 40;

/// Residual PageRank, pull direction.
///
/// Keeps `rank + residual = (1-d) + d * sum_in(rank / outdeg)` as an
/// invariant. Each round every vertex with residual above the tolerance
/// folds it into its rank and exposes `d * residual / outdeg` to its
/// out-neighbors, which pull it over their in-edges. Stops when no residual
/// exceeds the tolerance, so each vertex's fixed-point error is at most
/// the tolerance.
#[derive(Debug, Clone)]
pub struct PageRank {
    damping: f64,
    tolerance: f64,
    damping_fixed: u64,
    tolerance_fixed: u64,
    rank: Vec<u64>,
    residual: Vec<u64>,
    /// Contribution each out-edge of a vertex carries this round.
    share: Vec<u64>,
}

impl PageRank {
    pub fn new(damping: f64, tolerance: f64) -> Result<Self, EngineError> {
        if !(damping > 0.0 && damping < 1.0) {
            return Err(EngineError::Config(format!(
                "damping must be in (0, 1), got {damping}"
            )));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(EngineError::Config(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(PageRank {
            damping,
            tolerance,
            damping_fixed: (damping * RANK_SCALE as f64).round() as u64,
            tolerance_fixed: (tolerance * RANK_SCALE as f64).floor() as u64,
            rank: Vec::new(),
            residual: Vec::new(),
            share: Vec::new(),
        })
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Absorbs residuals above the tolerance and returns the vertices that
    /// have something to pull.
    fn absorb(&mut self, g: &Graph) -> Worklist {
        let csr = g.csr();
        let n = g.num_vertices();
        let mut pulls = vec![false; n];
        for u in 0..n {
            let res = self.residual[u];
            if res <= self.tolerance_fixed {
                self.share[u] = 0;
                continue;
            }
            self.rank[u] += res;
            self.residual[u] = 0;
            let out = csr.degree(u as VertexId) as u64;
            self.share[u] = (((res as u128 * self.damping_fixed as u128) >> SCALE_BITS) as u64)
                .checked_div(out)
                .unwrap_or(0);
            if self.share[u] > 0 {
                for &v in csr.neighbors(u as VertexId) {
                    pulls[v as usize] = true;
                }
            }
        }
        frontier_from_flags(&pulls)
    }
}

impl App for PageRank {
    fn name(&self) -> &'static str {
        "pr"
    }

    fn direction(&self) -> Direction {
        Direction::Pull
    }

    fn reduction(&self) -> Reduction {
        Reduction::Add
    }

    fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError> {
        let n = g.num_vertices();
        self.rank = vec![0; n];
        self.residual = vec![RANK_SCALE - self.damping_fixed; n];
        self.share = vec![0; n];
        Ok(self.absorb(g))
    }

    fn seed(&self, out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.rank.len(), 0);
    }

    fn apply(&self, _adj: &Adjacency, active: VertexId, neighbor: VertexId, _edge: usize) -> Option<Update> {
        let share = self.share[neighbor as usize];
        (share > 0).then_some(Update {
            target: active,
            value: share,
            push: false,
        })
    }

    fn finish_round(&mut self, g: &Graph, reduced: &[u64], _pushed: &Worklist) -> Worklist {
        for (res, &add) in self.residual.iter_mut().zip(reduced) {
            *res += add;
        }
        self.absorb(g)
    }

    fn labels(&self) -> LabelArray {
        LabelArray::Rank(
            self.rank
                .iter()
                .map(|&r| r as f64 / RANK_SCALE as f64)
                .collect(),
        )
    }
}
