//! The proposed defense end to end: profile each disk's benign throughput,
//! score fresh traces with partial curve mapping, cluster the scores with
//! k-means, alarm when at least three disks look anomalous, and measure
//! FPR/TPR over 1000 random four-disk combinations per volume.
//!
//! Run with: cargo run --example detector_eval

use udcsim::experiments::detect_eval_summaries;
use udcsim::{scenarios, Calibration};

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let scenario = scenarios::detect_eval()?;

    println!("volume_db    FPR      TPR   (alarm rule: >=3 anomalous disks)");
    for (volume, summary) in detect_eval_summaries(&scenario, &calibration)? {
        let fpr = summary.fpr.unwrap_or(f64::NAN);
        let tpr = summary.tpr.unwrap_or(f64::NAN);
        println!("{volume:>9.0}  {fpr:>6.4}  {tpr:>6.4}");
        assert!(fpr <= 0.01, "FPR {fpr} at {volume} dB");
        assert!(tpr >= 0.95, "TPR {tpr} at {volume} dB");
    }
    println!("\ndetector holds FPR <= 1% and TPR >= 95% at every calibrated volume");
    Ok(())
}
