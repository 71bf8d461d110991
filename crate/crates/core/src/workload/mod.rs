//! Synthetic I/O workloads and block-trace replay against simulated storage.

mod bench;
mod msr;
mod trace;

use serde::{Deserialize, Serialize};

pub use bench::{replay_trace, run_benchmark, NoiseModel, ReplayOutcome, StorageTarget};
pub use msr::{load_msr_trace, synthetic_trace, write_msr_csv, MsrTrace, TraceOp, TraceRequest};
pub use trace::ThroughputTrace;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkloadKind {
    SeqWrite,
    SeqRead,
    RandWrite,
    RandRead,
}

impl WorkloadKind {
    pub fn is_write(self) -> bool {
        matches!(self, WorkloadKind::SeqWrite | WorkloadKind::RandWrite)
    }

    pub fn label(self) -> &'static str {
        match self {
            WorkloadKind::SeqWrite => "seq_write",
            WorkloadKind::SeqRead => "seq_read",
            WorkloadKind::RandWrite => "rand_write",
            WorkloadKind::RandRead => "rand_read",
        }
    }
}

/// A benchmark run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub kind: WorkloadKind,
    pub duration_s: f64,
    #[serde(default = "default_request_kb")]
    pub request_size_kb: f64,
    #[serde(default = "default_partition_gb")]
    pub partition_gb: f64,
}

fn default_request_kb() -> f64 {
    128.0
}

fn default_partition_gb() -> f64 {
    60.0
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        if self.duration_s <= 0.0 {
            return Err(Error::validation("workload duration must be positive"));
        }
        if self.request_size_kb <= 0.0 || self.partition_gb <= 0.0 {
            return Err(Error::validation(
                "workload request size and partition size must be positive",
            ));
        }
        Ok(())
    }
}
