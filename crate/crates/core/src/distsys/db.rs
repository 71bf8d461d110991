//! Distributed-database latency inflation under excitation.

use serde::{Deserialize, Serialize};

use crate::curve::PiecewiseLinear;
use crate::error::{Error, Result};

/// One (ΔSPL dB → normalized latency) table for a given node split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DbLatencyTable {
    pub underwater_nodes: u32,
    pub normalized_latency: PiecewiseLinear,
}

/// Normalized-latency tables per underwater-node count, calibrated from
/// benchmark measurements against a two-server cluster.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DbLatencyModel {
    pub tables: Vec<DbLatencyTable>,
    /// Above this ΔSPL the underwater nodes stop resolving operations.
    pub out_of_service_db: f64,
}

impl DbLatencyModel {
    pub fn table(&self, underwater_nodes: u32) -> Result<&PiecewiseLinear> {
        self.tables
            .iter()
            .find(|t| t.underwater_nodes == underwater_nodes)
            .map(|t| &t.normalized_latency)
            .ok_or_else(|| {
                Error::config(format!(
                    "no database latency table for {underwater_nodes} underwater nodes"
                ))
            })
    }

    pub fn validate(&self) -> Result<()> {
        for table in &self.tables {
            let at_zero = table.normalized_latency.value_at(0.0);
            if at_zero < 1.0 {
                return Err(Error::config(format!(
                    "latency table for {} nodes must be ≥ 1 at ΔSPL 0, got {at_zero}",
                    table.underwater_nodes
                )));
            }
        }
        Ok(())
    }
}

/// A database cluster split across the underwater and on-land servers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DbCluster {
    pub total_nodes: u32,
    pub underwater_node_count: u32,
}

impl DbCluster {
    pub fn validate(&self) -> Result<()> {
        if ![3, 5, 7].contains(&self.underwater_node_count) {
            return Err(Error::validation(format!(
                "underwater node count must be one of 3, 5, or 7, got {}",
                self.underwater_node_count
            )));
        }
        if self.underwater_node_count > self.total_nodes {
            return Err(Error::validation(
                "underwater node count cannot exceed the cluster size",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DbLatency {
    /// Measured latency divided by the no-attack baseline, ≥ 1.
    Normalized(f64),
    /// The underwater nodes no longer resolve operations; the benchmark
    /// aborts and the node is removed.
    OutOfService,
}

/// Normalized cluster latency at `delta_spl`, or out-of-service above the
/// configured limit.
pub fn db_normalized_latency(
    model: &DbLatencyModel,
    cluster: &DbCluster,
    delta_spl: f64,
) -> Result<DbLatency> {
    if delta_spl < 0.0 {
        return Err(Error::validation("ΔSPL must be non-negative"));
    }
    cluster.validate()?;
    if delta_spl > model.out_of_service_db {
        return Ok(DbLatency::OutOfService);
    }
    let table = model.table(cluster.underwater_node_count)?;
    Ok(DbLatency::Normalized(table.value_at(delta_spl)))
}
