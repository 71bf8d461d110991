//! Attack range in open water: walk the hydrophone-measured SPL-distance
//! curve away from the enclosure with the amplifier at full drive and watch
//! how much throughput the attacker still controls at each distance.
//!
//! Run with: cargo run --example attack_range

use udcsim::acoustics::{delta_spl, empirical_spl_at_distance};
use udcsim::calibration::CurveVariant;
use udcsim::storage::degradation_multiplier;
use udcsim::Calibration;

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();
    let spl_curve = calibration.spl_distance(CurveVariant::OpenWater);
    let degradation = calibration.degradation(CurveVariant::OpenWater);

    // The measured curve is for the nominal drive level; a maxed-out
    // amplifier buys another 12 dB at the source.
    let drive_headroom_db = 12.0;
    let noise_floor = 114.0;

    println!("distance_m  delta_spl_db  throughput_drop");
    let mut prev_multiplier = -1.0;
    for distance in [0.3, 1.0, 2.0, 3.0, 4.5, 6.35] {
        let spl = empirical_spl_at_distance(spl_curve, distance)? + drive_headroom_db;
        let excess = delta_spl(spl, noise_floor);
        let multiplier = degradation_multiplier(excess, degradation, 1.0);
        println!(
            "{distance:>10.2}  {excess:>12.1}  {:>14.0}%",
            (1.0 - multiplier) * 100.0
        );
        // The attack weakens monotonically with distance.
        assert!(multiplier >= prev_multiplier);
        prev_multiplier = multiplier;
    }

    // Even at the far end of the measured range the attacker still knocks
    // out more than half the write throughput.
    let spl = empirical_spl_at_distance(spl_curve, 6.35)? + drive_headroom_db;
    let multiplier = degradation_multiplier(delta_spl(spl, noise_floor), degradation, 1.0);
    assert!((1.0 - multiplier) > 0.5);
    Ok(())
}
