use std::io;

use thiserror::Error;

use crate::simt::ThreadCoord;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: vertex id {value} does not fit in a 32-bit vertex id")]
    IdOverflow { line: usize, value: String },
    #[error("line {line}: negative edge weight {value}")]
    NegativeWeight { line: usize, value: String },
    #[error("bad binary graph: {0}")]
    Format(String),
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorklistError {
    #[error("vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: u32, num_vertices: usize },
    #[error("edge index {edge} out of range (total {total})")]
    EdgeOutOfRange { edge: usize, total: usize },
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid kernel configuration: {0}")]
    Config(String),
    #[error("thread {coord} panicked: {message}")]
    ThreadPanic { coord: ThreadCoord, message: String },
    #[error("operator failed on vertex {active}, edge {edge}: {message}")]
    Operator {
        active: u32,
        edge: usize,
        message: String,
    },
    #[error(transparent)]
    Worklist(#[from] WorklistError),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no convergence after {rounds} rounds (frontier still has {frontier} vertices)")]
    NonConvergence {
        rounds: usize,
        frontier: usize,
        metrics_dump: String,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Worklist(#[from] WorklistError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
