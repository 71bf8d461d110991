//! Distributed-system consequences of storage degradation: heartbeat-driven
//! node removal, distributed-database latency inflation, VM lifecycle
//! effects, load-balanced placement, and replica migration.

mod db;
mod dfs;
mod replica;
mod scheduler;
mod vm;

pub use db::{db_normalized_latency, DbCluster, DbLatency, DbLatencyModel, DbLatencyTable};
pub use dfs::{dfs_step, Location, Node, NodeEvent, NodeStatus};
pub use replica::{rereplicate, ReplicaEvent, ReplicaMap};
pub use scheduler::{schedule_vms, Assignment, Host, Scheduler};
pub use vm::{vm_state_duration, VirtualMachine, VmDuration, VmInflation, VmState};
