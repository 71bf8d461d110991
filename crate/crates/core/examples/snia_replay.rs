//! Block-trace replay at increasing volumes: request fulfillment declines
//! with volume, spikes when the slowest disk gets dropped from the array,
//! and collapses once the array fails.
//!
//! Uses a seeded synthetic trace by default; point the scenario's
//! `trace_path` at an MSR-format CSV (timestamp, hostname, disk number,
//! operation, offset, size, response time) to replay a real workload.
//!
//! Run with: cargo run --example snia_replay

use udcsim::experiments::execute;
use udcsim::{scenarios, Calibration};

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let scenario = scenarios::snia_replay()?;
    let artifacts = execute(&scenario, &calibration)?;

    println!("{}", artifacts.files["snia_replay.csv"]);

    let fulfilled_at = |volume: &str| -> u64 {
        artifacts.files["snia_replay.csv"]
            .lines()
            .find(|l| l.starts_with(volume))
            .and_then(|l| l.split(',').nth(1))
            .and_then(|v| v.parse().ok())
            .expect("volume row")
    };
    // The drop of the bottleneck member produces the fulfillment spike.
    assert!(fulfilled_at("32.0") > fulfilled_at("30.0"));
    println!(
        "spike: {} fulfilled at 32 dB vs {} at 30 dB",
        fulfilled_at("32.0"),
        fulfilled_at("30.0")
    );
    Ok(())
}
