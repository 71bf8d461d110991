//! Deterministic simulation of acoustic interference with submerged storage
//! clusters: sound propagation and coupling, per-disk throughput
//! degradation, the RAID-5 fault-tolerance cascade, distributed-system
//! consequences, and a throughput-profiling detector.
//!
//! The library is the primary interface; `examples/` holds one runnable
//! example per capability and the `udcsim` binary exposes the same recipes
//! as subcommands.

pub mod acoustics;
pub mod calibration;
pub mod curve;
pub mod detector;
pub mod distsys;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod plots;
pub mod scenarios;
pub mod storage;
pub mod workload;

pub use calibration::Calibration;
pub use engine::scenario::ScenarioConfig;
pub use error::{Error, Result};
