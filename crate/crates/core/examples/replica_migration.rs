//! Post-detection defense: once the detector flags the attacked nodes and
//! the filesystem removes one, re-replication restores the replication
//! factor using only healthy nodes outside the flagged set.
//!
//! Run with: cargo run --example replica_migration

use std::collections::BTreeSet;

use udcsim::distsys::{rereplicate, ReplicaEvent, ReplicaMap};

fn main() -> udcsim::Result<()> {
    let mut map = ReplicaMap::new(2)?;
    map.add_block("block-a", &["underwater-1", "land-1"]);
    map.add_block("block-b", &["underwater-1", "land-2"]);
    map.add_block("block-c", &["land-1", "land-2"]);

    // The detector flagged the second underwater node too, so it cannot
    // receive migrated replicas even though it is still up.
    let healthy: Vec<String> = ["land-1", "land-2", "land-3", "underwater-2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let affected = BTreeSet::from(["underwater-2".to_string()]);

    let events = rereplicate(&mut map, "underwater-1", &healthy, &affected);
    for event in &events {
        match event {
            ReplicaEvent::Migrated { block, from, to } => {
                println!("{block}: replica moved {from} -> {to}")
            }
            ReplicaEvent::UnderReplicated { block, have, want } => {
                println!("{block}: UNDER-REPLICATED {have}/{want}")
            }
        }
    }

    for (block, holders) in &map.blocks {
        assert_eq!(holders.len(), 2, "{block} lost redundancy");
        assert!(
            !holders.contains("underwater-2"),
            "{block} landed on a flagged node"
        );
    }
    println!("all blocks back at factor 2, none on flagged nodes");
    Ok(())
}
