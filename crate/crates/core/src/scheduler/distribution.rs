//! Mapping of a global edge range `[0, e)` onto `T` threads.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::simt::KernelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// Thread `i` takes edges `i, i+T, i+2T, ...`.
    Cyclic,
    /// Thread `i` takes the contiguous chunk `[i*c, (i+1)*c)`, `c = ceil(e/T)`.
    Blocked,
}

impl Distribution {
    /// Number of lockstep passes needed to cover `total_edges`.
    pub fn passes(self, total_edges: usize, total_threads: usize) -> usize {
        total_edges.div_ceil(total_threads)
    }

    /// Edge handled by `tid` in lockstep pass `pass`, if any.
    #[inline]
    pub fn edge_at(
        self,
        total_edges: usize,
        total_threads: usize,
        tid: usize,
        pass: usize,
    ) -> Option<usize> {
        let edge = match self {
            Distribution::Cyclic => pass * total_threads + tid,
            Distribution::Blocked => {
                let chunk = total_edges.div_ceil(total_threads);
                if pass >= chunk {
                    return None;
                }
                tid * chunk + pass
            }
        };
        (edge < total_edges).then_some(edge)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Cyclic => "cyclic",
            Distribution::Blocked => "blocked",
        })
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cyclic" => Ok(Distribution::Cyclic),
            "blocked" => Ok(Distribution::Blocked),
            other => Err(format!("unknown distribution {other:?} (expected cyclic or blocked)")),
        }
    }
}

/// Edges of thread `tid` under cyclic distribution.
pub fn assign_cyclic(
    total_edges: usize,
    config: &KernelConfig,
    tid: usize,
) -> impl Iterator<Item = usize> {
    debug_assert!(tid < config.total_threads());
    (tid..total_edges).step_by(config.total_threads())
}

/// Edges of thread `tid` under blocked distribution.
pub fn assign_blocked(
    total_edges: usize,
    config: &KernelConfig,
    tid: usize,
) -> std::ops::Range<usize> {
    debug_assert!(tid < config.total_threads());
    let chunk = total_edges.div_ceil(config.total_threads());
    let start = (tid * chunk).min(total_edges);
    start..(start + chunk).min(total_edges)
}
