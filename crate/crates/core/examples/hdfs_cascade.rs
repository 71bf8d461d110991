//! The heartbeat cascade: a sustained 38 dB tone stalls one member, the
//! controller drops it and service resumes, a second member follows, and
//! its drop kills the array and removes the data node for good.
//!
//! Run with: cargo run --example hdfs_cascade

use udcsim::experiments::execute;
use udcsim::{scenarios, Calibration};

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let scenario = scenarios::hdfs_cascade()?;
    let artifacts = execute(&scenario, &calibration)?;

    println!("event log:");
    for line in artifacts.files["events.csv"].lines().skip(1) {
        let mut cols = line.splitn(3, ',');
        let (t, _kind, detail) = (
            cols.next().unwrap_or_default(),
            cols.next().unwrap_or_default(),
            cols.next().unwrap_or_default(),
        );
        let minutes: f64 = t.parse::<f64>().unwrap_or(0.0) / 60.0;
        println!("  {minutes:>5.1} min  {detail}");
    }

    let cascade = artifacts
        .summary
        .iter()
        .find(|(k, _)| k == "cascade")
        .map(|(_, v)| v.as_str())
        .unwrap_or_default();
    // blocked -> first drop -> live again -> blocked -> fatal drop -> removed
    assert_eq!(cascade.matches("blocked").count(), 2);
    assert_eq!(cascade.matches("drop").count(), 2);
    assert!(cascade.ends_with("removed@905s"));
    println!("\ncascade: {cascade}");
    Ok(())
}
