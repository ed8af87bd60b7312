use serde::{Deserialize, Serialize};

use crate::apps::Reduction;
use crate::graph::{Adjacency, VertexId};

/// Contiguous vertex blocks, one per device. A device owns (is master of)
/// its block and every traversal-direction edge of those vertices; any
/// other endpoint of such an edge is mirrored on the device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    bounds: Vec<usize>,
    mirrors: Vec<Vec<VertexId>>,
    mirror_offsets: Vec<usize>,
    mirror_devices: Vec<u32>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncStats {
    /// Mirror values sent to masters.
    pub reduce_messages: u64,
    /// Master values sent back to mirrors.
    pub broadcast_messages: u64,
}

impl SyncStats {
    pub fn total(&self) -> u64 {
        self.reduce_messages + self.broadcast_messages
    }
}

impl Partition {
    /// Splits `0..|V|` into `devices` blocks of roughly equal
    /// `degree + 1` weight.
    pub fn contiguous(adj: &Adjacency, devices: usize) -> Self {
        assert!(devices >= 1, "at least one device");
        let n = adj.num_vertices();
        let offsets = adj.offsets();
        let weight = |v: usize| offsets[v] + v;
        let total = weight(n);
        let mut bounds = Vec::with_capacity(devices + 1);
        bounds.push(0);
        for k in 1..devices {
            let target = (total * k).div_ceil(devices);
            // first vertex whose cumulative weight reaches the target
            let (mut lo, mut hi) = (0, n + 1);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if weight(mid) < target {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            let cut = lo.min(n);
            bounds.push(cut.max(*bounds.last().unwrap()));
        }
        bounds.push(n);

        let mut per_vertex: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut mirrors = vec![Vec::new(); devices];
        for d in 0..devices {
            let mut seen = vec![false; n];
            for v in bounds[d]..bounds[d + 1] {
                for &u in adj.neighbors(v as VertexId) {
                    let u = u as usize;
                    if !(bounds[d]..bounds[d + 1]).contains(&u) && !seen[u] {
                        seen[u] = true;
                    }
                }
            }
            for (u, _) in seen.iter().enumerate().filter(|(_, &s)| s) {
                mirrors[d].push(u as VertexId);
                per_vertex[u].push(d as u32);
            }
        }
        let mut mirror_offsets = Vec::with_capacity(n + 1);
        mirror_offsets.push(0);
        let mut mirror_devices = Vec::new();
        for list in per_vertex {
            mirror_devices.extend(list);
            mirror_offsets.push(mirror_devices.len());
        }
        Partition {
            bounds,
            mirrors,
            mirror_offsets,
            mirror_devices,
        }
    }

    pub fn num_devices(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        *self.bounds.last().unwrap()
    }

    pub fn masters(&self, device: usize) -> std::ops::Range<usize> {
        self.bounds[device]..self.bounds[device + 1]
    }

    #[inline]
    pub fn owner(&self, v: VertexId) -> usize {
        self.bounds.partition_point(|&b| b <= v as usize) - 1
    }

    /// Mirrors held by `device`, ascending.
    pub fn mirrors(&self, device: usize) -> &[VertexId] {
        &self.mirrors[device]
    }

    /// Devices holding a mirror of `v`, ascending.
    pub fn mirror_devices(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        &self.mirror_devices[self.mirror_offsets[v]..self.mirror_offsets[v + 1]]
    }

    pub fn total_mirrors(&self) -> usize {
        self.mirror_devices.len()
    }
}

/// Reduces every mirror into its master, then broadcasts the master value
/// back to all mirrors. `copies[d]` is device `d`'s full-length label (or
/// reduction buffer) array; only master and mirror entries are consulted.
///
/// With `Add`, mirrors hold partial sums that are folded into the master
/// exactly once; after the broadcast they hold the total, so buffers must
/// be reseeded before reuse.
pub fn sync_labels(partition: &Partition, copies: &mut [Vec<u64>], reduction: Reduction) -> SyncStats {
    assert_eq!(copies.len(), partition.num_devices());
    let mut stats = SyncStats::default();
    let identity = reduction.identity();
    for d in 0..partition.num_devices() {
        for &u in partition.mirrors(d) {
            let value = copies[d][u as usize];
            let master = partition.owner(u);
            let sends = match reduction {
                Reduction::Min => value < copies[master][u as usize],
                Reduction::Add => value != identity,
            };
            if sends {
                stats.reduce_messages += 1;
                reduction.combine(&mut copies[master][u as usize], value);
            }
        }
    }
    for d in 0..partition.num_devices() {
        for &u in partition.mirrors(d) {
            let master_value = copies[partition.owner(u)][u as usize];
            let slot = &mut copies[d][u as usize];
            if *slot != master_value {
                *slot = master_value;
                stats.broadcast_messages += 1;
            }
        }
    }
    stats
}
