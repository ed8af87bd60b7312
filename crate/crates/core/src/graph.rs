//! Immutable CSR/CSC graph storage and loaders.
//!
//! The outgoing adjacency (CSR) is always present. The incoming mirror (CSC)
//! is built on first use and cached, so a `Graph` can be shared behind `&`
//! by every simulated device.

use std::io::{BufRead, Read, Write};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type VertexId = u32;

/// Traversal direction of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Active vertex updates its out-neighbors (CSR).
    Push,
    /// Active vertex reads its in-neighbors (CSC).
    Pull,
}

/// One compressed adjacency structure (either CSR or CSC).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Option<Vec<u32>>,
}

impl Adjacency {
    fn empty(num_vertices: usize, weighted: bool) -> Self {
        Adjacency {
            offsets: vec![0; num_vertices + 1],
            targets: Vec::new(),
            weights: weighted.then(Vec::new),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Global edge index of the first edge of `v`.
    #[inline]
    pub fn first_edge(&self, v: VertexId) -> usize {
        self.offsets[v as usize]
    }

    #[inline]
    pub fn edge_range(&self, v: VertexId) -> std::ops::Range<usize> {
        let v = v as usize;
        self.offsets[v]..self.offsets[v + 1]
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.edge_range(v)]
    }

    /// Weight of edge `e`; unweighted graphs report 1.
    #[inline]
    pub fn weight(&self, e: usize) -> u32 {
        self.weights.as_ref().map_or(1, |w| w[e])
    }

    /// Source (row) vertex of every edge, i.e. the COO view of this adjacency.
    fn sources(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.num_edges());
        for v in 0..self.num_vertices() {
            let d = self.offsets[v + 1] - self.offsets[v];
            out.extend(std::iter::repeat_n(v as VertexId, d));
        }
        out
    }

    /// Stable counting-sort transpose.
    fn transpose(&self) -> Adjacency {
        let n = self.num_vertices();
        let mut offsets = vec![0usize; n + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; self.num_edges()];
        let mut weights = self.weights.as_ref().map(|_| vec![0u32; self.num_edges()]);
        for src in 0..n {
            for e in self.offsets[src]..self.offsets[src + 1] {
                let dst = self.targets[e] as usize;
                let slot = cursor[dst];
                cursor[dst] += 1;
                targets[slot] = src as VertexId;
                if let (Some(out), Some(w)) = (weights.as_mut(), self.weights.as_ref()) {
                    out[slot] = w[e];
                }
            }
        }
        Adjacency {
            offsets,
            targets,
            weights,
        }
    }
}

#[derive(Debug)]
pub struct Graph {
    csr: Adjacency,
    csc: OnceLock<Adjacency>,
    coo_sources: [OnceLock<Vec<VertexId>>; 2],
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            csr: self.csr.clone(),
            csc: self.csc.clone(),
            coo_sources: [OnceLock::new(), OnceLock::new()],
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.csr == other.csr
    }
}

impl Graph {
    /// Builds a graph from an edge list. Edges keep their relative order
    /// within each source vertex; duplicates and self-loops are preserved.
    pub fn from_edges(
        num_vertices: usize,
        edges: &[(VertexId, VertexId)],
        weights: Option<&[u32]>,
    ) -> Result<Self, GraphError> {
        if let Some(w) = weights {
            if w.len() != edges.len() {
                return Err(GraphError::Config(format!(
                    "{} weights for {} edges",
                    w.len(),
                    edges.len()
                )));
            }
        }
        if let Some(&(s, d)) = edges
            .iter()
            .find(|&&(s, d)| s as usize >= num_vertices || d as usize >= num_vertices)
        {
            return Err(GraphError::Config(format!(
                "edge ({s}, {d}) out of range for {num_vertices} vertices"
            )));
        }
        let mut offsets = vec![0usize; num_vertices + 1];
        for &(s, _) in edges {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..num_vertices {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; edges.len()];
        let mut out_weights = weights.map(|_| vec![0u32; edges.len()]);
        for (i, &(s, d)) in edges.iter().enumerate() {
            let slot = cursor[s as usize];
            cursor[s as usize] += 1;
            targets[slot] = d;
            if let (Some(out), Some(w)) = (out_weights.as_mut(), weights) {
                out[slot] = w[i];
            }
        }
        Ok(Self::from_csr(Adjacency {
            offsets,
            targets,
            weights: out_weights,
        }))
    }

    /// Wraps raw CSR arrays after validating the offset/target invariants.
    pub fn from_csr_parts(
        offsets: Vec<usize>,
        targets: Vec<VertexId>,
        weights: Option<Vec<u32>>,
    ) -> Result<Self, GraphError> {
        if offsets.is_empty() || offsets[0] != 0 {
            return Err(GraphError::Format("offsets must start at 0".into()));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::Format("offsets must be non-decreasing".into()));
        }
        if *offsets.last().unwrap() != targets.len() {
            return Err(GraphError::Format(
                "last offset must equal the edge count".into(),
            ));
        }
        let n = offsets.len() - 1;
        if targets.iter().any(|&t| t as usize >= n) {
            return Err(GraphError::Format("edge target out of range".into()));
        }
        if weights.as_ref().is_some_and(|w| w.len() != targets.len()) {
            return Err(GraphError::Format("weight count mismatch".into()));
        }
        Ok(Self::from_csr(Adjacency {
            offsets,
            targets,
            weights,
        }))
    }

    fn from_csr(csr: Adjacency) -> Self {
        Graph {
            csr,
            csc: OnceLock::new(),
            coo_sources: [OnceLock::new(), OnceLock::new()],
        }
    }

    pub fn empty(num_vertices: usize) -> Self {
        Self::from_csr(Adjacency::empty(num_vertices, false))
    }

    pub fn num_vertices(&self) -> usize {
        self.csr.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.csr.num_edges()
    }

    pub fn is_weighted(&self) -> bool {
        self.csr.weights.is_some()
    }

    pub fn csr(&self) -> &Adjacency {
        &self.csr
    }

    /// Incoming adjacency, built on first access.
    pub fn csc(&self) -> &Adjacency {
        self.csc.get_or_init(|| self.csr.transpose())
    }

    pub fn has_csc(&self) -> bool {
        self.csc.get().is_some()
    }

    pub fn adjacency(&self, dir: Direction) -> &Adjacency {
        match dir {
            Direction::Push => self.csr(),
            Direction::Pull => self.csc(),
        }
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.csr.degree(v)
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.csc().degree(v)
    }

    pub fn max_degree(&self, dir: Direction) -> usize {
        let adj = self.adjacency(dir);
        (0..adj.num_vertices() as VertexId)
            .map(|v| adj.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Row index of every edge of the traversal-direction adjacency, built
    /// once per direction. Costs 4 bytes per edge on top of CSR/CSC.
    pub fn coo_sources(&self, dir: Direction) -> &[VertexId] {
        let slot = match dir {
            Direction::Push => 0,
            Direction::Pull => 1,
        };
        self.coo_sources[slot].get_or_init(|| self.adjacency(dir).sources())
    }

    /// Simple undirected view: every edge in both directions, duplicates and
    /// self-loops removed, weights dropped.
    pub fn symmetrized(&self) -> Graph {
        let n = self.num_vertices();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(2 * self.num_edges());
        for u in 0..n as VertexId {
            for &v in self.csr.neighbors(u) {
                if u != v {
                    edges.push((u, v));
                    edges.push((v, u));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = Graph::from_edges(n, &edges, None).expect("ids already validated");
        // symmetric: the transpose has the same sorted rows
        let _ = g.csc.set(g.csr.clone());
        g
    }

    /// Every edge as `(src, dst, weight)` in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |u| {
            self.csr
                .edge_range(u)
                .map(move |e| (u, self.csr.targets[e], self.csr.weight(e)))
        })
    }

    /// Writes the little-endian binary CSR format (see README).
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&BINARY_VERSION.to_le_bytes())?;
        w.write_all(&(self.num_vertices() as u64).to_le_bytes())?;
        w.write_all(&(self.num_edges() as u64).to_le_bytes())?;
        let flags: u32 = u32::from(self.is_weighted());
        w.write_all(&flags.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        for &o in &self.csr.offsets {
            w.write_all(&(o as u64).to_le_bytes())?;
        }
        for &t in &self.csr.targets {
            w.write_all(&t.to_le_bytes())?;
        }
        if let Some(ws) = &self.csr.weights {
            for &x in ws {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Graph, GraphError> {
        let mut header = [0u8; BINARY_HEADER_LEN];
        r.read_exact(&mut header)?;
        if &header[0..4] != BINARY_MAGIC {
            return Err(GraphError::Format("bad magic".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
        let dword = |i: usize| u64::from_le_bytes(header[i..i + 8].try_into().unwrap());
        let version = word(4);
        if version != BINARY_VERSION {
            return Err(GraphError::Format(format!("unsupported version {version}")));
        }
        let n = usize::try_from(dword(8)).map_err(|_| GraphError::Format("|V| too large".into()))?;
        let m = usize::try_from(dword(16)).map_err(|_| GraphError::Format("|E| too large".into()))?;
        let weighted = word(24) & 1 == 1;

        let mut buf = vec![0u8; (n + 1) * 8];
        r.read_exact(&mut buf)?;
        let offsets = buf
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()) as usize)
            .collect();
        let mut buf = vec![0u8; m * 4];
        r.read_exact(&mut buf)?;
        let targets = buf
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let weights = if weighted {
            r.read_exact(&mut buf)?;
            Some(
                buf.chunks_exact(4)
                    .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            )
        } else {
            None
        };
        Graph::from_csr_parts(offsets, targets, weights)
    }
}

pub const BINARY_MAGIC: &[u8; 4] = b"GLBG";
pub const BINARY_VERSION: u32 = 1;
pub const BINARY_HEADER_LEN: usize = 32;

/// Forces the CSC mirror and returns the graph.
pub fn build_csc(g: Graph) -> Graph {
    let _ = g.csc();
    g
}

/// Parses a whitespace-separated `src dst [weight]` edge list.
///
/// Blank lines and lines starting with `#` or `%` are skipped, except a
/// `# vertices N` directive which fixes the vertex count (otherwise it is
/// `max id + 1`).
pub fn load_edge_list<R: BufRead>(source: R, weighted: bool) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut declared: Option<usize> = None;
    let mut max_id: Option<VertexId> = None;

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#').or_else(|| trimmed.strip_prefix('%')) {
            let mut words = rest.split_whitespace();
            if words.next() == Some("vertices") {
                let n = words.next().ok_or_else(|| GraphError::Parse {
                    line: line_no,
                    message: "vertices directive without a count".into(),
                })?;
                declared = Some(n.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    message: format!("bad vertex count {n:?}"),
                })?);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let expected = if weighted { 3 } else { 2 };
        if fields.len() != expected {
            return Err(GraphError::Parse {
                line: line_no,
                message: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let src = parse_id(fields[0], line_no)?;
        let dst = parse_id(fields[1], line_no)?;
        if weighted {
            let w = fields[2];
            if w.starts_with('-') {
                return Err(GraphError::NegativeWeight {
                    line: line_no,
                    value: w.into(),
                });
            }
            weights.push(w.parse::<u32>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("bad weight {w:?}"),
            })?);
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        edges.push((src, dst));
    }

    let implied = max_id.map_or(0, |m| m as usize + 1);
    let n = match declared {
        Some(n) if n < implied => {
            return Err(GraphError::Config(format!(
                "declared {n} vertices but edge list uses id {}",
                implied - 1
            )))
        }
        Some(n) => n,
        None => implied,
    };
    Graph::from_edges(n, &edges, weighted.then_some(&weights[..]))
}

fn parse_id(field: &str, line: usize) -> Result<VertexId, GraphError> {
    if field.starts_with('-') || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(GraphError::Parse {
            line,
            message: format!("bad vertex id {field:?}"),
        });
    }
    match field.parse::<u64>() {
        Ok(v) if v < VertexId::MAX as u64 => Ok(v as VertexId),
        _ => Err(GraphError::IdOverflow {
            line,
            value: field.into(),
        }),
    }
}
