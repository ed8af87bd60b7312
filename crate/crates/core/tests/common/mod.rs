//! Independent reference implementations and fixtures shared by the
//! integration tests. Nothing here calls into the scheduler or engine.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use graphlb::graph::{Graph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const UNREACHABLE: u64 = u64::MAX;

/// Plain edge list `(src, dst, weight)` read back from a graph.
pub fn edge_list(g: &Graph) -> Vec<(usize, usize, u64)> {
    g.edges().map(|(u, v, w)| (u as usize, v as usize, w as u64)).collect()
}

pub fn bfs(n: usize, edges: &[(usize, usize, u64)], source: usize) -> Vec<u64> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in edges {
        adj[u].push(v);
    }
    let mut dist = vec![UNREACHABLE; n];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn dijkstra(n: usize, edges: &[(usize, usize, u64)], source: usize) -> Vec<u64> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
    }
    let mut dist = vec![UNREACHABLE; n];
    dist[source] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Smallest vertex id of each weakly connected component.
pub fn union_find_components(n: usize, edges: &[(usize, usize, u64)]) -> Vec<u32> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v, _) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        // keep the smaller id as root
        if a < b {
            parent[b] = a;
        } else {
            parent[a] = b;
        }
    }
    (0..n).map(|v| find(&mut parent, v) as u32).collect()
}

/// Iterates `x = (1-d) + d * sum_in(x_u / outdeg_u)` to a fixed point.
pub fn power_iteration(n: usize, edges: &[(usize, usize, u64)], damping: f64) -> Vec<f64> {
    let mut outdeg = vec![0usize; n];
    for &(u, _, _) in edges {
        outdeg[u] += 1;
    }
    let mut x = vec![1.0 - damping; n];
    for _ in 0..10_000 {
        let mut next = vec![1.0 - damping; n];
        for &(u, v, _) in edges {
            next[v] += damping * x[u] / outdeg[u] as f64;
        }
        let delta = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if delta < 1e-13 {
            break;
        }
    }
    x
}

/// k-core membership by repeatedly deleting one vertex of degree < k from
/// the undirected simple graph.
pub fn peel(n: usize, edges: &[(usize, usize, u64)], k: usize) -> Vec<bool> {
    let mut nbrs = vec![std::collections::BTreeSet::new(); n];
    for &(u, v, _) in edges {
        if u != v {
            nbrs[u].insert(v);
            nbrs[v].insert(u);
        }
    }
    let mut alive = vec![true; n];
    while let Some(v) = (0..n).find(|&v| alive[v] && nbrs[v].len() < k) {
        alive[v] = false;
        let gone: Vec<usize> = nbrs[v].iter().copied().collect();
        for u in gone {
            nbrs[u].remove(&v);
        }
        nbrs[v].clear();
    }
    alive
}

/// `(position, offset)` of a global edge index by walking the degrees.
pub fn linear_owner(degrees: &[usize], edge: usize) -> Option<(usize, usize)> {
    let mut start = 0;
    for (i, &d) in degrees.iter().enumerate() {
        if edge < start + d {
            return Some((i, edge - start));
        }
        start += d;
    }
    None
}

/// Sorted `(dst, src)` pairs, i.e. the transpose as a multiset.
pub fn transpose_pairs(edges: &[(usize, usize, u64)]) -> Vec<(usize, usize, u64)> {
    let mut t: Vec<_> = edges.iter().map(|&(u, v, w)| (v, u, w)).collect();
    t.sort_unstable();
    t
}

pub fn path(n: u32) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n as usize, &edges, None).unwrap()
}

/// Center 0 with edges out to every leaf and back.
pub fn star(leaves: u32) -> Graph {
    let mut edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    edges.extend((1..=leaves).map(|v| (v, 0)));
    Graph::from_edges(leaves as usize + 1, &edges, None).unwrap()
}

pub fn triangle() -> Graph {
    Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)], Some(&[2, 3, 4])).unwrap()
}

/// Uniform random weighted digraph with `n` vertices and `m` edges.
pub fn random_graph(n: usize, m: usize, max_weight: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(VertexId, VertexId)> = (0..m)
        .map(|_| (rng.gen_range(0..n) as VertexId, rng.gen_range(0..n) as VertexId))
        .collect();
    let weights: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=max_weight)).collect();
    Graph::from_edges(n, &edges, Some(&weights)).unwrap()
}

/// Vertex 0 points at one hub per entry of `degrees` (ids 1..); hub `i` has
/// `degrees[i]` out-edges into a pool of leaves.
pub fn hubs(degrees: &[usize], leaves: usize) -> Graph {
    let n = 1 + degrees.len() + leaves;
    let mut edges = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        let hub = 1 + i as VertexId;
        edges.push((0, hub));
        for j in 0..d {
            edges.push((hub, (1 + degrees.len() + (i * 31 + j) % leaves) as VertexId));
        }
    }
    Graph::from_edges(n, &edges, None).unwrap()
}
