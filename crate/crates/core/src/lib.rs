//! Deterministic simulation of GPU load-balancing schedulers for graph
//! analytics.

pub mod apps;
pub mod engine;
pub mod error;
pub mod graph;
pub mod rmat;
pub mod runner;
pub mod scheduler;
pub mod simt;
pub mod worklist;
