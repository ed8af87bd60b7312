use crate::graph::{Adjacency, VertexId};
use crate::simt::KernelConfig;
use crate::worklist::Worklist;

/// A binned vertex and the thread that inspected it. The owner decides which
/// warp/CTA processes a medium/large vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Binned {
    pub vertex: VertexId,
    pub owner: usize,
}

/// Degree cut-offs: small `< small_below`, medium `< medium_below`, large
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwcCutoffs {
    pub small_below: usize,
    pub medium_below: usize,
}

impl TwcCutoffs {
    /// Thread/warp/CTA granularity: below a warp, below a CTA.
    pub fn for_config(config: &KernelConfig) -> Self {
        TwcCutoffs {
            small_below: config.warp_size(),
            medium_below: config.threads_per_cta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwcBins {
    pub small: Vec<Binned>,
    pub medium: Vec<Binned>,
    pub large: Vec<Binned>,
    pub cutoffs: TwcCutoffs,
}

impl TwcBins {
    pub fn new(cutoffs: TwcCutoffs) -> Self {
        TwcBins {
            small: Vec::new(),
            medium: Vec::new(),
            large: Vec::new(),
            cutoffs,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.small.is_empty() && self.medium.is_empty() && self.large.is_empty()
    }

    pub fn len(&self) -> usize {
        self.small.len() + self.medium.len() + self.large.len()
    }

    fn insert(&mut self, item: Binned, degree: usize) {
        if degree < self.cutoffs.small_below {
            self.small.push(item);
        } else if degree < self.cutoffs.medium_below {
            self.medium.push(item);
        } else {
            self.large.push(item);
        }
    }
}

/// Splits the frontier into huge vertices (`degree >= threshold`) and TWC
/// bins. Frontier position `i` is inspected by thread `i mod T`; both
/// outputs keep frontier order.
pub fn inspect(
    wl: &Worklist,
    adj: &Adjacency,
    threshold: usize,
    config: &KernelConfig,
    cutoffs: TwcCutoffs,
) -> (Vec<VertexId>, TwcBins) {
    let threshold = threshold.max(1);
    let t = config.total_threads();
    let mut huge = Vec::new();
    let mut bins = TwcBins::new(cutoffs);
    for (pos, v) in wl.iter().enumerate() {
        let degree = adj.degree(v);
        if degree >= threshold {
            huge.push(v);
        } else {
            bins.insert(
                Binned {
                    vertex: v,
                    owner: pos % t,
                },
                degree,
            );
        }
    }
    (huge, bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn star(center_degree: usize) -> Graph {
        let edges: Vec<_> = (1..=center_degree as u32).map(|v| (0, v)).collect();
        Graph::from_edges(center_degree + 1, &edges, None).unwrap()
    }

    #[test]
    fn huge_vertex_at_exact_threshold() {
        let g = star(200_000);
        let cfg = KernelConfig::new(640, 256, 32).unwrap();
        assert_eq!(cfg.total_threads(), 163_840);
        let wl = Worklist::from_vertices(g.num_vertices(), [0]).unwrap();
        let (huge, bins) = inspect(&wl, g.csr(), 163_840, &cfg, TwcCutoffs::for_config(&cfg));
        assert_eq!(huge, vec![0]);
        assert!(bins.is_empty());
    }

    #[test]
    fn nothing_huge_below_threshold() {
        let g = star(100);
        let cfg = KernelConfig::new(2, 128, 32).unwrap();
        let wl = Worklist::all(g.num_vertices());
        let (huge, bins) = inspect(&wl, g.csr(), 256, &cfg, TwcCutoffs::for_config(&cfg));
        assert!(huge.is_empty());
        assert_eq!(bins.len(), 101);
        assert_eq!(bins.medium.len(), 1);
        assert_eq!(bins.small.len(), 100);
    }

    #[test]
    fn threshold_one_makes_every_nonisolated_vertex_huge() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0)], None).unwrap();
        let cfg = KernelConfig::new(1, 32, 32).unwrap();
        let wl = Worklist::all(4);
        let (huge, bins) = inspect(&wl, g.csr(), 1, &cfg, TwcCutoffs::for_config(&cfg));
        assert_eq!(huge, vec![0, 1, 2]);
        assert_eq!(bins.small, vec![Binned { vertex: 3, owner: 3 }]);
        // threshold 0 behaves like 1
        let (huge0, _) = inspect(&wl, g.csr(), 0, &cfg, TwcCutoffs::for_config(&cfg));
        assert_eq!(huge0, huge);
    }

    #[test]
    fn bins_respect_cutoffs() {
        let cfg = KernelConfig::new(2, 64, 32).unwrap();
        let mut edges = Vec::new();
        for (v, d) in [(0u32, 31usize), (1, 32), (2, 63), (3, 64), (4, 500)] {
            edges.extend((0..d).map(|i| (v, 5 + (i % 10) as u32)));
        }
        let g = Graph::from_edges(15, &edges, None).unwrap();
        let wl = Worklist::from_vertices(15, 0..5).unwrap();
        let (huge, bins) = inspect(&wl, g.csr(), 400, &cfg, TwcCutoffs::for_config(&cfg));
        let ids = |b: &[Binned]| b.iter().map(|x| x.vertex).collect::<Vec<_>>();
        assert_eq!(huge, vec![4]);
        assert_eq!(ids(&bins.small), vec![0]);
        assert_eq!(ids(&bins.medium), vec![1, 2]);
        assert_eq!(ids(&bins.large), vec![3]);
    }
}
