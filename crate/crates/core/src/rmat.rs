//! Recursive-matrix (R-MAT) power-law graph generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Graph, VertexId};

/// Quadrant probabilities `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmatProbabilities {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RmatProbabilities {
    /// Graph500 defaults.
    pub const SKEWED: Self = RmatProbabilities {
        a: 0.57,
        b: 0.19,
        c: 0.19,
        d: 0.05,
    };
    pub const UNIFORM: Self = RmatProbabilities {
        a: 0.25,
        b: 0.25,
        c: 0.25,
        d: 0.25,
    };

    fn validate(&self) -> Result<(), GraphError> {
        let ps = [self.a, self.b, self.c, self.d];
        if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(GraphError::Config(format!(
                "rmat probabilities must be non-negative, got {ps:?}"
            )));
        }
        let sum: f64 = ps.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(GraphError::Config(format!(
                "rmat probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

impl Default for RmatProbabilities {
    fn default() -> Self {
        Self::SKEWED
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmatConfig {
    pub scale: u32,
    pub edge_factor: usize,
    pub seed: u64,
    pub probabilities: RmatProbabilities,
    /// Draw integer edge weights uniformly from `1..=max_weight`.
    pub max_weight: Option<u32>,
}

impl RmatConfig {
    pub fn new(scale: u32, edge_factor: usize, seed: u64) -> Self {
        RmatConfig {
            scale,
            edge_factor,
            seed,
            probabilities: RmatProbabilities::SKEWED,
            max_weight: None,
        }
    }

    pub fn with_probabilities(mut self, p: RmatProbabilities) -> Self {
        self.probabilities = p;
        self
    }

    pub fn with_weights(mut self, max_weight: u32) -> Self {
        self.max_weight = Some(max_weight);
        self
    }
}

/// Generates `2^scale` vertices and `edge_factor * 2^scale` directed edges.
/// Output is a pure function of the configuration.
pub fn generate_rmat(cfg: &RmatConfig) -> Result<Graph, GraphError> {
    if cfg.scale == 0 || cfg.scale > 31 {
        return Err(GraphError::Config(format!(
            "rmat scale must be in 1..=31, got {}",
            cfg.scale
        )));
    }
    cfg.probabilities.validate()?;
    if cfg.max_weight == Some(0) {
        return Err(GraphError::Config("max weight must be at least 1".into()));
    }
    let n = 1usize << cfg.scale;
    let m = cfg.edge_factor * n;
    let p = cfg.probabilities;
    let ab = p.a + p.b;
    let a_given_top = if ab > 0.0 { p.a / ab } else { 0.0 };
    let c_given_bottom = if ab < 1.0 { p.c / (1.0 - ab) } else { 0.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(m);
    for _ in 0..m {
        let (mut src, mut dst) = (0u32, 0u32);
        for level in (0..cfg.scale).rev() {
            let bottom = rng.gen::<f64>() >= ab;
            let right = if bottom {
                rng.gen::<f64>() >= c_given_bottom
            } else {
                rng.gen::<f64>() >= a_given_top
            };
            src |= u32::from(bottom) << level;
            dst |= u32::from(right) << level;
        }
        edges.push((src, dst));
    }

    let weights = cfg.max_weight.map(|max| {
        let mut wrng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5745_4947_4854);
        (0..m).map(|_| wrng.gen_range(1..=max)).collect::<Vec<u32>>()
    });
    Graph::from_edges(n, &edges, weights.as_deref())
}
