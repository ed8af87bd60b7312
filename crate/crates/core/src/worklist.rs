//! Frontiers and the degree prefix sums used to recover edge endpoints.

use crate::error::WorklistError;
use crate::graph::{Adjacency, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Dense { flags: Vec<bool>, count: usize },
    Sparse { items: Vec<VertexId>, member: Vec<bool> },
}

/// Set of active vertices, either as a flag vector (dense) or as an
/// insertion-ordered id list (sparse). Both forms reject duplicates.
#[derive(Debug, Clone)]
pub struct Worklist {
    repr: Repr,
}

impl PartialEq for Worklist {
    /// Set equality, independent of representation and order.
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices() == other.num_vertices()
            && self.len() == other.len()
            && self.iter().all(|v| other.contains(v))
    }
}

impl Worklist {
    pub fn dense(num_vertices: usize) -> Self {
        Worklist {
            repr: Repr::Dense {
                flags: vec![false; num_vertices],
                count: 0,
            },
        }
    }

    pub fn sparse(num_vertices: usize) -> Self {
        Worklist {
            repr: Repr::Sparse {
                items: Vec::new(),
                member: vec![false; num_vertices],
            },
        }
    }

    /// Every vertex active, ascending.
    pub fn all(num_vertices: usize) -> Self {
        Worklist {
            repr: Repr::Sparse {
                items: (0..num_vertices as VertexId).collect(),
                member: vec![true; num_vertices],
            },
        }
    }

    pub fn from_vertices<I>(num_vertices: usize, vertices: I) -> Result<Self, WorklistError>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut wl = Worklist::sparse(num_vertices);
        for v in vertices {
            wl.push(v)?;
        }
        Ok(wl)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    pub fn num_vertices(&self) -> usize {
        match &self.repr {
            Repr::Dense { flags, .. } => flags.len(),
            Repr::Sparse { member, .. } => member.len(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Dense { count, .. } => *count,
            Repr::Sparse { items, .. } => items.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn push(&mut self, v: VertexId) -> Result<(), WorklistError> {
        let n = self.num_vertices();
        if v as usize >= n {
            return Err(WorklistError::VertexOutOfRange {
                vertex: v,
                num_vertices: n,
            });
        }
        match &mut self.repr {
            Repr::Dense { flags, count } => {
                if !flags[v as usize] {
                    flags[v as usize] = true;
                    *count += 1;
                }
            }
            Repr::Sparse { items, member } => {
                if !member[v as usize] {
                    member[v as usize] = true;
                    items.push(v);
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        match &self.repr {
            Repr::Dense { flags, .. } => flags.get(v as usize).copied().unwrap_or(false),
            Repr::Sparse { member, .. } => member.get(v as usize).copied().unwrap_or(false),
        }
    }

    /// Dense form iterates in ascending id order, sparse in insertion order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = VertexId> + '_> {
        match &self.repr {
            Repr::Dense { flags, .. } => Box::new(
                flags
                    .iter()
                    .enumerate()
                    .filter(|(_, &f)| f)
                    .map(|(i, _)| i as VertexId),
            ),
            Repr::Sparse { items, .. } => Box::new(items.iter().copied()),
        }
    }

    pub fn to_dense(&self) -> Worklist {
        let mut flags = vec![false; self.num_vertices()];
        for v in self.iter() {
            flags[v as usize] = true;
        }
        Worklist {
            repr: Repr::Dense {
                flags,
                count: self.len(),
            },
        }
    }

    /// Sparse form. From a dense list the order is ascending; a sparse list
    /// is copied as is.
    pub fn to_sparse(&self) -> Worklist {
        match &self.repr {
            Repr::Sparse { .. } => self.clone(),
            Repr::Dense { flags, .. } => Worklist {
                repr: Repr::Sparse {
                    items: self.iter().collect(),
                    member: flags.clone(),
                },
            },
        }
    }

    /// Active vertices in ascending id order.
    pub fn sorted(&self) -> Vec<VertexId> {
        match &self.repr {
            Repr::Dense { .. } => self.iter().collect(),
            Repr::Sparse { items, .. } => {
                let mut v = items.clone();
                v.sort_unstable();
                v
            }
        }
    }

    pub fn clear(&mut self) {
        match &mut self.repr {
            Repr::Dense { flags, count } => {
                flags.iter_mut().for_each(|f| *f = false);
                *count = 0;
            }
            Repr::Sparse { items, member } => {
                for &v in items.iter() {
                    member[v as usize] = false;
                }
                items.clear();
            }
        }
    }
}

/// Inclusive prefix sums of traversal-direction degrees over a vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrefixWork {
    pub vertices: Vec<VertexId>,
    pub cumulative: Vec<usize>,
}

impl PrefixWork {
    /// Builds directly from degrees; mostly for tests and fixtures.
    pub fn from_degrees(vertices: Vec<VertexId>, degrees: &[usize]) -> Self {
        assert_eq!(vertices.len(), degrees.len());
        let cumulative = degrees
            .iter()
            .scan(0usize, |acc, &d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        PrefixWork {
            vertices,
            cumulative,
        }
    }

    /// `e` in the cost analysis: total edges covered.
    pub fn total_edges(&self) -> usize {
        self.cumulative.last().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Maps a global edge index to `(list position, vertex, local offset)` by
    /// binary search, appending every probed index of `cumulative` to `probes`.
    pub fn find_owner(
        &self,
        global_edge: usize,
        probes: &mut Vec<u32>,
    ) -> Result<Owner, WorklistError> {
        let total = self.total_edges();
        if global_edge >= total {
            return Err(WorklistError::EdgeOutOfRange {
                edge: global_edge,
                total,
            });
        }
        // first position whose inclusive sum exceeds the edge
        let (mut lo, mut hi) = (0usize, self.cumulative.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            probes.push(mid as u32);
            if self.cumulative[mid] > global_edge {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let before = if lo == 0 { 0 } else { self.cumulative[lo - 1] };
        Ok(Owner {
            position: lo,
            vertex: self.vertices[lo],
            offset: global_edge - before,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Owner {
    pub position: usize,
    pub vertex: VertexId,
    pub offset: usize,
}

/// Prefix sums of the degrees of `work` in the given adjacency (out-degrees
/// for CSR, in-degrees for CSC), in list order.
pub fn compute_prefix(work: &[VertexId], adj: &Adjacency) -> PrefixWork {
    let degrees: Vec<usize> = work.iter().map(|&v| adj.degree(v)).collect();
    PrefixWork::from_degrees(work.to_vec(), &degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn fig4() -> PrefixWork {
        PrefixWork::from_degrees(vec![10, 11, 12], &[40, 24, 13])
    }

    #[test]
    fn push_is_idempotent() {
        for mut wl in [Worklist::dense(5), Worklist::sparse(5)] {
            wl.push(3).unwrap();
            assert_eq!(wl.iter().collect::<Vec<_>>(), vec![3]);
            wl.push(3).unwrap();
            assert_eq!(wl.len(), 1);
        }
    }

    #[test]
    fn push_all_vertices() {
        let mut wl = Worklist::sparse(7);
        for v in (0..7).rev() {
            wl.push(v).unwrap();
        }
        assert_eq!(wl.len(), 7);
        assert_eq!(wl.iter().collect::<Vec<_>>(), vec![6, 5, 4, 3, 2, 1, 0]);
        assert_eq!(wl.sorted(), (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn push_out_of_range() {
        let mut wl = Worklist::dense(2);
        assert_eq!(
            wl.push(2),
            Err(WorklistError::VertexOutOfRange {
                vertex: 2,
                num_vertices: 2
            })
        );
    }

    #[test]
    fn clear_resets_membership() {
        let mut wl = Worklist::from_vertices(4, [1, 3]).unwrap();
        wl.clear();
        assert!(wl.is_empty());
        assert!(!wl.contains(3));
        wl.push(3).unwrap();
        assert_eq!(wl.len(), 1);
    }

    #[test]
    fn prefix_of_figure_four_degrees() {
        let p = fig4();
        assert_eq!(p.cumulative, vec![40, 64, 77]);
        assert_eq!(p.total_edges(), 77);
        assert_eq!(PrefixWork::default().total_edges(), 0);
        assert_eq!(PrefixWork::from_degrees(vec![0], &[9]).cumulative, vec![9]);
    }

    #[test]
    fn compute_prefix_uses_direction() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)], None).unwrap();
        assert_eq!(compute_prefix(&[0, 1, 2], g.csr()).cumulative, vec![2, 3, 3]);
        assert_eq!(compute_prefix(&[0, 1, 2], g.csc()).cumulative, vec![0, 1, 3]);
    }

    #[test]
    fn find_owner_figure_four() {
        let p = fig4();
        let mut probes = Vec::new();
        let o = p.find_owner(4, &mut probes).unwrap();
        assert_eq!((o.vertex, o.offset), (10, 4));
        let o = p.find_owner(40, &mut probes).unwrap();
        assert_eq!((o.vertex, o.offset), (11, 0));
        let o = p.find_owner(76, &mut probes).unwrap();
        assert_eq!((o.vertex, o.offset), (12, 12));
        assert_eq!(
            p.find_owner(77, &mut probes),
            Err(WorklistError::EdgeOutOfRange { edge: 77, total: 77 })
        );
    }

    #[test]
    fn find_owner_skips_zero_degree_entries() {
        let p = PrefixWork::from_degrees(vec![0, 1, 2, 3], &[0, 3, 0, 2]);
        let owners: Vec<_> = (0..5)
            .map(|e| p.find_owner(e, &mut Vec::new()).unwrap().vertex)
            .collect();
        assert_eq!(owners, vec![1, 1, 1, 3, 3]);
    }

    #[test]
    fn same_owner_same_path() {
        let p = fig4();
        let mut a = Vec::new();
        let mut b = Vec::new();
        p.find_owner(41, &mut a).unwrap();
        p.find_owner(63, &mut b).unwrap();
        assert_eq!(a, b);
    }
}
