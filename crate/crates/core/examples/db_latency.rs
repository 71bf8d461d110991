//! Distributed-database latency under injection, for three node splits of a
//! 10-node cluster. The 3-underwater-node split peaks at +92.7% at 38 dB;
//! past 38 dB the underwater nodes leave service entirely.
//!
//! Run with: cargo run --example db_latency

use udcsim::distsys::{db_normalized_latency, DbCluster, DbLatency};
use udcsim::Calibration;

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();

    println!("volume_db   3 nodes   5 nodes   7 nodes");
    for volume in [0.0, 26.0, 30.0, 34.0, 38.0, 40.0] {
        let mut row = format!("{volume:>9.0}");
        for split in [3u32, 5, 7] {
            let cluster = DbCluster {
                total_nodes: 10,
                underwater_node_count: split,
            };
            match db_normalized_latency(&calibration.db_latency, &cluster, volume)? {
                DbLatency::Normalized(latency) => row.push_str(&format!("   {latency:>6.3}x")),
                DbLatency::OutOfService => row.push_str("      down"),
            }
        }
        println!("{row}");
    }

    let three = DbCluster {
        total_nodes: 10,
        underwater_node_count: 3,
    };
    let peak = db_normalized_latency(&calibration.db_latency, &three, 38.0)?;
    assert_eq!(peak, DbLatency::Normalized(1.927));
    Ok(())
}
