//! Data-node liveness as seen by a distributed filesystem's heartbeat
//! monitoring.

use serde::{Deserialize, Serialize};

use crate::storage::{DiskState, Raid5Array, RaidStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Underwater,
    OnLand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Live,
    Blocked,
    Removed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeEvent {
    Blocked,
    Live,
    Removed,
}

/// A data node backed by a RAID array.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: String,
    pub location: Location,
    pub status: NodeStatus,
}

impl Node {
    pub fn new(id: impl Into<String>, location: Location) -> Self {
        Node {
            id: id.into(),
            location,
            status: NodeStatus::Live,
        }
    }
}

/// Advances a node's filesystem-visible status from its array state.
///
/// The node blocks while its array cannot serve (an active member is
/// unresponsive), returns to live once a drop restores service, and is
/// removed — permanently — when the array fails.
pub fn dfs_step(node: &mut Node, array: &Raid5Array, states: &[DiskState]) -> Vec<NodeEvent> {
    let mut events = Vec::new();
    if node.status == NodeStatus::Removed {
        return events;
    }
    if array.status() == RaidStatus::Failed {
        node.status = NodeStatus::Removed;
        events.push(NodeEvent::Removed);
        return events;
    }
    let can_serve = array.can_serve(states);
    match (node.status, can_serve) {
        (NodeStatus::Live, false) => {
            node.status = NodeStatus::Blocked;
            events.push(NodeEvent::Blocked);
        }
        (NodeStatus::Blocked, true) => {
            node.status = NodeStatus::Live;
            events.push(NodeEvent::Live);
        }
        _ => {}
    }
    events
}
