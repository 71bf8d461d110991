//! Replica placement repair after a node removal.
//!
//! Post-detection, blocks that lived on a removed node are re-replicated
//! onto healthy nodes outside the attack-affected set.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Block id → the set of node ids holding replicas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicaMap {
    pub replication_factor: usize,
    pub blocks: BTreeMap<String, BTreeSet<String>>,
}

impl ReplicaMap {
    pub fn new(replication_factor: usize) -> Result<Self> {
        if replication_factor < 2 {
            return Err(Error::validation("replication factor must be at least 2"));
        }
        Ok(ReplicaMap {
            replication_factor,
            blocks: BTreeMap::new(),
        })
    }

    pub fn add_block(&mut self, block: impl Into<String>, holders: &[&str]) {
        self.blocks.insert(
            block.into(),
            holders.iter().map(|h| h.to_string()).collect(),
        );
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplicaEvent {
    Migrated {
        block: String,
        from: String,
        to: String,
    },
    UnderReplicated {
        block: String,
        have: usize,
        want: usize,
    },
}

/// Drops `removed_node` from every replica set and restores the replication
/// factor using healthy nodes outside `affected` (the detector-flagged set).
/// Blocks that cannot be restored produce under-replication warnings.
///
/// New holders are chosen deterministically: the healthy candidate currently
/// holding the fewest blocks, ties broken by node id.
pub fn rereplicate(
    map: &mut ReplicaMap,
    removed_node: &str,
    healthy_nodes: &[String],
    affected: &BTreeSet<String>,
) -> Vec<ReplicaEvent> {
    let mut events = Vec::new();
    let mut load: BTreeMap<&str, usize> = BTreeMap::new();
    for node in healthy_nodes {
        load.insert(node.as_str(), 0);
    }
    for holders in map.blocks.values() {
        for holder in holders {
            if let Some(count) = load.get_mut(holder.as_str()) {
                *count += 1;
            }
        }
    }

    let block_ids: Vec<String> = map.blocks.keys().cloned().collect();
    for block in block_ids {
        let holders = map.blocks.get_mut(&block).expect("key from iteration");
        if !holders.remove(removed_node) {
            continue;
        }
        if holders.len() >= map.replication_factor {
            continue;
        }
        let candidate = healthy_nodes
            .iter()
            .filter(|n| {
                n.as_str() != removed_node && !affected.contains(*n) && !holders.contains(*n)
            })
            .min_by_key(|n| (load.get(n.as_str()).copied().unwrap_or(0), n.as_str()));
        match candidate {
            Some(node) => {
                holders.insert(node.clone());
                *load.entry(node.as_str()).or_insert(0) += 1;
                events.push(ReplicaEvent::Migrated {
                    block: block.clone(),
                    from: removed_node.to_string(),
                    to: node.clone(),
                });
            }
            None => {
                events.push(ReplicaEvent::UnderReplicated {
                    block: block.clone(),
                    have: holders.len(),
                    want: map.replication_factor,
                });
            }
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn restores_replication_factor_with_a_spare() {
        let mut map = ReplicaMap::new(2).unwrap();
        map.add_block("b1", &["n1", "n2"]);
        map.add_block("b2", &["n1", "n3"]);
        let healthy = names(&["n2", "n3", "n4"]);
        let events = rereplicate(&mut map, "n1", &healthy, &BTreeSet::new());
        assert_eq!(
            events
                .iter()
                .filter(|e| matches!(e, ReplicaEvent::Migrated { .. }))
                .count(),
            2
        );
        for holders in map.blocks.values() {
            assert_eq!(holders.len(), 2);
            assert!(!holders.contains("n1"));
        }
    }

    #[test]
    fn no_spare_leaves_a_warning_and_excludes_the_removed_node() {
        let mut map = ReplicaMap::new(2).unwrap();
        map.add_block("b1", &["n1", "n2"]);
        let healthy = names(&["n2"]); // n2 already holds b1
        let events = rereplicate(&mut map, "n1", &healthy, &BTreeSet::new());
        assert_eq!(
            events,
            vec![ReplicaEvent::UnderReplicated {
                block: "b1".to_string(),
                have: 1,
                want: 2
            }]
        );
        assert_eq!(map.blocks["b1"], BTreeSet::from(["n2".to_string()]));
    }

    #[test]
    fn new_replicas_avoid_the_affected_set_exhaustively() {
        // Every subset of candidate spares marked affected: the chosen
        // destination must never be in the affected set, and a block is
        // restored exactly when a healthy unaffected candidate exists.
        let spares = ["n3", "n4", "n5"];
        for mask in 0u32..8 {
            let affected: BTreeSet<String> = spares
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.to_string())
                .collect();
            let mut map = ReplicaMap::new(2).unwrap();
            map.add_block("b1", &["n1", "n2"]);
            let healthy = names(&["n2", "n3", "n4", "n5"]);
            let events = rereplicate(&mut map, "n1", &healthy, &affected);
            let restored = map.blocks["b1"].len() == 2;
            let unaffected_spare_exists = spares.iter().any(|s| !affected.contains(*s));
            assert_eq!(restored, unaffected_spare_exists, "mask {mask}");
            for event in events {
                if let ReplicaEvent::Migrated { to, .. } = event {
                    assert!(!affected.contains(&to), "landed on affected node {to}");
                }
            }
        }
    }

    #[test]
    fn rejects_replication_factor_below_two() {
        assert!(ReplicaMap::new(1).is_err());
    }
}
