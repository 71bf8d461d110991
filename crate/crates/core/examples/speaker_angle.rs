//! Speaker orientation: an off-axis speaker loses roughly a third of its
//! effect but still degrades the array.
//!
//! Run with: cargo run --example speaker_angle

use udcsim::acoustics::angle_factor;
use udcsim::experiments::execute;
use udcsim::{scenarios, Calibration};

fn main() -> udcsim::Result<()> {
    let calibration = Calibration::embedded_default();

    // The calibration table itself: 32% less effective at 45 degrees, 34%
    // less at 90 degrees.
    for angle in [0.0, 45.0, 90.0] {
        let factor = angle_factor(angle, &calibration.acoustics.angle_table)?;
        println!("{angle:>5.0} deg -> effectiveness x{factor:.2}");
    }

    let scenario = scenarios::angle()?;
    let artifacts = execute(&scenario, &calibration)?;
    println!("\n{}", artifacts.files["angle.csv"]);
    Ok(())
}
