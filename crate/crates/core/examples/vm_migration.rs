//! Load-balancer manipulation: a slowly rising volume schedule starves the
//! underwater host of placements, and once its array fails the VMs still
//! running there block permanently.
//!
//! Run with: cargo run --example vm_migration

use udcsim::experiments::execute;
use udcsim::{scenarios, Calibration};

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let scenario = scenarios::vm_migration()?;
    let artifacts = execute(&scenario, &calibration)?;

    let get = |key: &str| -> String {
        artifacts
            .summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    };

    println!(
        "baseline underwater assignments: {}",
        get("baseline_vms_assigned_underwater")
    );
    println!(
        "attacked underwater assignments: {}",
        get("attack_vms_assigned_underwater")
    );
    println!("share drop: {}", get("underwater_share_drop"));
    println!("VMs permanently blocked: {}", get("vms_blocked_final"));

    let share_drop: f64 = get("underwater_share_drop").parse().unwrap();
    assert!(
        (0.58..=0.74).contains(&share_drop),
        "share drop {share_drop}"
    );
    assert!(get("vms_blocked_final").parse::<u32>().unwrap() > 0);
    Ok(())
}
