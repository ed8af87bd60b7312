//! Benchmark applications written as edge operators.
//!
//! Rounds are bulk-synchronous: `apply` reads only the labels as they were
//! at the start of the round, and every write goes through a commutative
//! reduction (`min` or integer `add`) owned by the engine. The order in
//! which a scheduler visits edges therefore cannot change any label, and
//! every scheduler produces the same frontier sequence.

mod cc;
mod kcore;
mod pagerank;
mod traversal;

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use cc::ConnectedComponents;
pub use kcore::KCore;
pub use pagerank::{PageRank, RANK_SCALE};
pub use traversal::{Bfs, Sssp};

use crate::error::EngineError;
use crate::graph::{Adjacency, Direction, Graph, VertexId};
use crate::worklist::Worklist;

/// Distance label of an unreachable vertex.
pub const UNREACHABLE: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Min,
    Add,
}

impl Reduction {
    /// Neutral element, i.e. the value of an untouched reduction slot.
    pub fn identity(self) -> u64 {
        match self {
            Reduction::Min => u64::MAX,
            Reduction::Add => 0,
        }
    }

    #[inline]
    pub fn combine(self, slot: &mut u64, value: u64) {
        match self {
            Reduction::Min => *slot = (*slot).min(value),
            Reduction::Add => *slot += value,
        }
    }
}

/// A value to fold into `target`'s reduction slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Update {
    pub target: VertexId,
    pub value: u64,
    /// Whether `target` should be reported as pushed by the kernel.
    pub push: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "lowercase")]
pub enum LabelArray {
    /// Hop or weighted distance; [`UNREACHABLE`] for unreachable vertices.
    Distance(Vec<u64>),
    /// Smallest vertex id of the component.
    Component(Vec<u32>),
    Rank(Vec<f64>),
    /// Membership in the k-core.
    Core(Vec<bool>),
}

impl LabelArray {
    pub fn len(&self) -> usize {
        match self {
            LabelArray::Distance(v) => v.len(),
            LabelArray::Component(v) => v.len(),
            LabelArray::Rank(v) => v.len(),
            LabelArray::Core(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First vertex whose labels differ by more than `tol` (exact for
    /// integer labels), with both values rendered.
    pub fn first_difference(&self, other: &LabelArray, tol: f64) -> Option<(usize, String, String)> {
        fn diff<T: PartialEq + fmt::Debug>(
            a: &[T],
            b: &[T],
            same: impl Fn(&T, &T) -> bool,
        ) -> Option<(usize, String, String)> {
            if a.len() != b.len() {
                return Some((a.len().min(b.len()), format!("len {}", a.len()), format!("len {}", b.len())));
            }
            a.iter()
                .zip(b)
                .position(|(x, y)| !same(x, y))
                .map(|i| (i, format!("{:?}", a[i]), format!("{:?}", b[i])))
        }
        match (self, other) {
            (LabelArray::Distance(a), LabelArray::Distance(b)) => diff(a, b, |x, y| x == y),
            (LabelArray::Component(a), LabelArray::Component(b)) => diff(a, b, |x, y| x == y),
            (LabelArray::Core(a), LabelArray::Core(b)) => diff(a, b, |x, y| x == y),
            (LabelArray::Rank(a), LabelArray::Rank(b)) => diff(a, b, |x, y| (x - y).abs() <= tol),
            _ => Some((0, "label kind".into(), "other label kind".into())),
        }
    }

    pub fn as_ranks(&self) -> Option<&[f64]> {
        match self {
            LabelArray::Rank(r) => Some(r),
            _ => None,
        }
    }
}

/// An application as seen by the engine.
pub trait App {
    fn name(&self) -> &'static str;

    fn direction(&self) -> Direction;

    fn reduction(&self) -> Reduction;

    /// The graph the operator runs on; undirected apps substitute the
    /// symmetrized view.
    fn view<'g>(&self, g: &'g Graph) -> Cow<'g, Graph> {
        Cow::Borrowed(g)
    }

    /// Initializes labels and returns the first frontier.
    fn init(&mut self, g: &Graph) -> Result<Worklist, EngineError>;

    /// Fills `out` with the starting content of a reduction buffer.
    fn seed(&self, out: &mut Vec<u64>);

    /// The operator along one edge of the traversal adjacency.
    fn apply(&self, adj: &Adjacency, active: VertexId, neighbor: VertexId, edge: usize)
        -> Option<Update>;

    /// Commits the reduced buffer and returns the next frontier.
    fn finish_round(&mut self, g: &Graph, reduced: &[u64], pushed: &Worklist) -> Worklist;

    fn labels(&self) -> LabelArray;
}

/// Application selector with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "app", rename_all = "lowercase")]
pub enum AppKind {
    Bfs { source: VertexId },
    Sssp { source: VertexId },
    Cc,
    Pr { damping: f64, tolerance: f64 },
    Kcore { k: u64 },
}

impl AppKind {
    pub fn name(&self) -> &'static str {
        match self {
            AppKind::Bfs { .. } => "bfs",
            AppKind::Sssp { .. } => "sssp",
            AppKind::Cc => "cc",
            AppKind::Pr { .. } => "pr",
            AppKind::Kcore { .. } => "kcore",
        }
    }

    pub fn build(&self) -> Result<Box<dyn App>, EngineError> {
        Ok(match *self {
            AppKind::Bfs { source } => Box::new(Bfs::new(source)),
            AppKind::Sssp { source } => Box::new(Sssp::new(source)),
            AppKind::Cc => Box::new(ConnectedComponents::new()),
            AppKind::Pr { damping, tolerance } => Box::new(PageRank::new(damping, tolerance)?),
            AppKind::Kcore { k } => Box::new(KCore::new(k)?),
        })
    }
}

/// Dense flags → ascending sparse worklist.
pub(crate) fn frontier_from_flags(flags: &[bool]) -> Worklist {
    let mut wl = Worklist::sparse(flags.len());
    for (v, _) in flags.iter().enumerate().filter(|(_, &f)| f) {
        wl.push(v as VertexId).expect("index in range");
    }
    wl
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions_are_commutative() {
        let mut a = Reduction::Min.identity();
        Reduction::Min.combine(&mut a, 5);
        Reduction::Min.combine(&mut a, 3);
        Reduction::Min.combine(&mut a, 4);
        assert_eq!(a, 3);
        let mut s = Reduction::Add.identity();
        for x in [4, 1, 7] {
            Reduction::Add.combine(&mut s, x);
        }
        assert_eq!(s, 12);
    }

    #[test]
    fn label_difference() {
        let a = LabelArray::Rank(vec![1.0, 2.0]);
        let b = LabelArray::Rank(vec![1.0, 2.0 + 1e-9]);
        assert!(a.first_difference(&b, 1e-7).is_none());
        assert_eq!(a.first_difference(&b, 0.0).unwrap().0, 1);
        let c = LabelArray::Component(vec![0, 0]);
        assert!(a.first_difference(&c, 1.0).is_some());
    }
}
